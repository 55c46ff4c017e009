use moodtag_core::features::{FeatureMatrix, WindowFeatureRow};
use moodtag_core::fusion::{cluster, fuse_polarity, FusedResult};
use moodtag_core::mood::{map_quadrant, AxisSign, MoodCategory, MoodPoint};
use moodtag_core::mood_mapper::{analyze_audio, minmax_normalize};
use moodtag_core::Polarity;
use proptest::prelude::*;

/// Straight-line re-implementation of the audio mood mapping.
fn oracle(rows: &[[f64; 11]]) -> (f64, f64, f64, f64) {
    let n = rows.len();
    let mut norm = vec![[0.0; 11]; n];
    for c in 0..11 {
        let mut lo = rows[0][c];
        let mut hi = rows[0][c];
        for r in rows {
            lo = lo.min(r[c]);
            hi = hi.max(r[c]);
        }
        for w in 0..n {
            norm[w][c] = if hi > lo {
                (rows[w][c] - lo) / (hi - lo) * 100.0
            } else {
                50.0
            };
        }
    }
    let mut parents = [vec![], vec![], vec![]];
    for v in &norm {
        parents[0].push(v[0] * 0.8 + (100.0 - v[1]) * 0.2);
        parents[1].push(v[2] * 0.2 + v[3] * 0.4 + v[4] * 0.3 + v[5] * 0.1);
        let r = v[6] * 0.25 + v[7] * 0.45 + v[8] * 0.2 + (v[9] + v[10]) * 0.05;
        parents[2].push(if r > 100.0 { 100.0 } else { r });
    }
    let mut scores = [0.0; 3];
    for (i, p) in parents.iter().enumerate() {
        let max = p.iter().cloned().fold(f64::MIN, f64::max);
        let mut total = 0.0;
        for f in p {
            let w = if max > 0.0 { f / max * 100.0 } else { 0.0 };
            total += w / 5.0 - 10.0;
        }
        scores[i] = total / n as f64;
    }
    let [intensity, timbre, rhythm] = scores;
    let valence = if intensity < 0.0 {
        0.7 * timbre + 0.3 * rhythm
    } else {
        0.3 * timbre + 0.7 * rhythm
    };
    (intensity, timbre, rhythm, valence)
}

fn row_strategy() -> impl Strategy<Value = [f64; 11]> {
    (
        (
            0.0f64..1.0,
            0.0f64..100.0,
            0.0f64..8000.0,
            0.0f64..8000.0,
            0.0f64..8000.0,
            0.0f64..1.0,
        ),
        (
            0.0f64..2.0,
            prop::option::of(30.0f64..240.0),
            0.0f64..1.0,
            0.0f64..1.0,
            0.0f64..1.0,
        ),
    )
        .prop_map(|((a, b, c, d, e, f), (g, h, i, j, k))| [a, b, c, d, e, f, g, h.unwrap_or(0.0), i, j, k])
}

fn matrix(rows: &[[f64; 11]]) -> FeatureMatrix {
    FeatureMatrix {
        song_id: "m".into(),
        rows: rows
            .iter()
            .enumerate()
            .map(|(i, v)| WindowFeatureRow {
                window_index: i,
                rms: v[0],
                low_energy: v[1],
                zero_cross: v[2],
                centroid: v[3],
                rolloff: v[4],
                entropy: v[5],
                beat_strength: v[6],
                tempo: (v[7] > 0.0).then_some(v[7]),
                regularity: v[8],
                pos_autocorr: v[9],
                neg_autocorr: v[10],
            })
            .collect(),
    }
}

fn point() -> impl Strategy<Value = MoodPoint> {
    (-10.0f64..=10.0, -10.0f64..=10.0).prop_map(|(v, a)| MoodPoint::new(v, a))
}

fn polarity() -> impl Strategy<Value = Polarity> {
    prop_oneof![Just(Polarity::Positive), Just(Polarity::Negative), Just(Polarity::Null)]
}

proptest! {
    #[test]
    fn analyze_audio_matches_oracle(rows in prop::collection::vec(row_strategy(), 1..12)) {
        let mood = analyze_audio(&matrix(&rows));
        let (i, t, r, v) = oracle(&rows);
        prop_assert!((mood.summary.intensity - i).abs() < 1e-9);
        prop_assert!((mood.summary.timbre - t).abs() < 1e-9);
        prop_assert!((mood.summary.rhythm - r).abs() < 1e-9);
        prop_assert!((mood.point.valence - v).abs() < 1e-9);
        prop_assert_eq!(mood.point.arousal, mood.summary.intensity);
        prop_assert!(mood.point.is_valid());
        prop_assert_eq!(mood.label, map_quadrant(mood.point));
    }

    #[test]
    fn minmax_is_affine_invariant(column in prop::collection::vec(-1e3f64..1e3, 2..40), a in 1e-3f64..1e3, b in -1e3f64..1e3) {
        let base = minmax_normalize(&column);
        let moved: Vec<f64> = column.iter().map(|x| a * x + b).collect();
        let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // Guard against spans the affine map collapses below rounding.
        prop_assume!((hi - lo) > 1e-6);
        for (x, y) in base.iter().zip(minmax_normalize(&moved)) {
            prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
        prop_assert!(base.iter().all(|v| (0.0..=100.0).contains(v)));
        let argmin = column.iter().position(|&v| v == lo).unwrap();
        let argmax = column.iter().position(|&v| v == hi).unwrap();
        prop_assert_eq!(base[argmin], 0.0);
        prop_assert_eq!(base[argmax], 100.0);
    }

    #[test]
    fn fusion_touches_only_valence(p in point(), pol in polarity()) {
        let r = fuse_polarity(p, pol);
        prop_assert_eq!(r.post_fusion.arousal.to_bits(), p.arousal.to_bits());
        prop_assert!((r.post_fusion.valence - p.valence).abs() <= 1.0 + 1e-12);
        prop_assert!(r.post_fusion.is_valid());
        // The label can only move along the valence axis.
        prop_assert_eq!(AxisSign::classify(r.post_fusion.arousal), AxisSign::classify(p.arousal));
    }

    #[test]
    fn clusters_partition_the_input(points in prop::collection::vec((point(), polarity()), 0..60), force in any::<bool>()) {
        let results: Vec<(usize, FusedResult)> =
            points.iter().enumerate().map(|(i, (p, pol))| (i, fuse_polarity(*p, *pol))).collect();
        let clusters = cluster(results.clone(), force);
        let mut seen: Vec<usize> = clusters.quadrants.iter().flatten().chain(&clusters.boundary).copied().collect();
        seen.sort();
        prop_assert_eq!(seen, (0..points.len()).collect::<Vec<_>>());
        if force {
            prop_assert!(clusters.boundary.is_empty());
        }
        for q in 1..=4u8 {
            for &i in clusters.quadrant(q) {
                let label = results[i].1.final_label.category;
                prop_assert!(label.quadrant() == Some(q) || (force && label.quadrant().is_none()));
            }
        }
    }
}

#[test]
fn fusion_over_ten_thousand_points() {
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(10_000));
    runner
        .run(&(point(), polarity()), |(p, pol)| {
            let r = fuse_polarity(p, pol);
            let expected = match pol {
                Polarity::Positive => (p.valence + 1.0).min(10.0),
                Polarity::Negative => (p.valence - 1.0).max(-10.0),
                Polarity::Null => p.valence,
            };
            prop_assert_eq!(r.post_fusion.valence, expected);
            prop_assert_eq!(r.post_fusion.arousal, p.arousal);
            if pol == Polarity::Null {
                prop_assert_eq!(r.audio_label, r.final_label);
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn grid_partitions_the_square() {
    let mut counts = std::collections::HashMap::new();
    for i in -20..=20 {
        for j in -20..=20 {
            let p = MoodPoint::new(i as f64 * 0.5, j as f64 * 0.5);
            let label = map_quadrant(p).category;
            let sign = |v: f64| {
                if v >= 1.0 {
                    AxisSign::Positive
                } else if v <= -1.0 {
                    AxisSign::Negative
                } else {
                    AxisSign::Zero
                }
            };
            let matching: Vec<MoodCategory> = MoodCategory::ALL
                .into_iter()
                .filter(|&c| c == MoodCategory::from_signs(sign(p.valence), sign(p.arousal)))
                .collect();
            assert_eq!(matching, vec![label], "{p:?}");
            *counts.entry(label).or_insert(0) += 1;
        }
    }
    assert_eq!(counts.len(), 9);
    assert_eq!(counts.values().sum::<i32>(), 41 * 41);
    // 19 positive, 3 zero (-0.5, 0, 0.5) and 19 negative grid values per axis.
    assert_eq!(counts[&MoodCategory::Q1], 19 * 19);
    assert_eq!(counts[&MoodCategory::Undetermined], 9);
    assert_eq!(counts[&MoodCategory::Q23], 3 * 19);
}
