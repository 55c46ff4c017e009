mod common;

use common::*;
use moodtag_core::audio_io::{canonicalize, resample, AudioClip};
use moodtag_core::features::{extract_features, timbre_subfeatures};
use proptest::prelude::*;

fn mono(samples: Vec<f64>, rate: u32) -> AudioClip {
    AudioClip {
        samples,
        channels: 1,
        sample_rate: rate,
        source_path: "prop.wav".into(),
    }
}

/// Clicks plus noise, clipped to full scale.
fn busy_signal(seed: u64, bpm: f64, noise: f64, secs: f64) -> Vec<f64> {
    let clicks = click_train(bpm, secs);
    let hiss = white_noise(seed, noise, clicks.len());
    clicks
        .iter()
        .zip(hiss)
        .map(|(c, n)| (c * 0.8 + n).clamp(-1.0, 1.0))
        .collect()
}

fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

fn coefficient_of_variation(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / v.len() as f64;
    if mean == 0.0 {
        if var == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        var.sqrt() / mean.abs()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn amplitude_scaling(seed in 0u64..1000, bpm in 60.0f64..180.0, k in 0.01f64..=1.0) {
        let signal = busy_signal(seed, bpm, 0.2, 6.0);
        let scaled: Vec<f64> = signal.iter().map(|x| x * k).collect();
        let a = &extract_features(&mono(signal, 16_000), "a").rows[0];
        let b = &extract_features(&mono(scaled, 16_000), "b").rows[0];

        prop_assert!(relative_close(b.rms, k * a.rms, 1e-12));
        for (x, y) in [
            (a.zero_cross, b.zero_cross),
            (a.centroid, b.centroid),
            (a.rolloff, b.rolloff),
            (a.entropy, b.entropy),
            (a.tempo.unwrap_or(0.0), b.tempo.unwrap_or(0.0)),
            (a.beat_strength, b.beat_strength),
            (a.regularity, b.regularity),
        ] {
            prop_assert!(relative_close(x, y, 1e-6), "{x} vs {y}");
        }
    }

    #[test]
    fn rows_stay_in_range(seed in 0u64..1000, bpm in 30.0f64..240.0, noise in 0.0f64..1.0, secs in 0.01f64..12.0) {
        let signal = busy_signal(seed, bpm, noise, secs);
        for row in extract_features(&mono(signal, 16_000), "r").rows {
            prop_assert!(row.in_range(), "{row:?}");
        }
    }

    #[test]
    fn canonicalize_is_idempotent(seed in 0u64..1000, rate in prop::sample::select(vec![8_000u32, 11_025, 22_050, 44_100, 48_000]), channels in 1u16..=2) {
        let frames = rate as usize / 4;
        let samples = white_noise(seed, 0.9, frames * channels as usize);
        let clip = AudioClip { samples, channels, sample_rate: rate, source_path: "x.wav".into() };
        let once = canonicalize(&clip).unwrap();
        let twice = canonicalize(&once).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.samples.iter().all(|s| (-1.0..=1.0).contains(s)));
        let drift = (once.samples.len() as f64 / 16_000.0 - frames as f64 / rate as f64).abs();
        prop_assert!(drift <= 1.0 / 16_000.0);
    }

    #[test]
    fn resampling_preserves_band_limited_energy(freq in 50.0f64..3000.0, amp in 0.05f64..0.95, rate in prop::sample::select(vec![22_050u32, 32_000, 44_100, 48_000])) {
        let input = sine(freq, amp, 1.0, rate as f64);
        let out = resample(&input, rate, 16_000).unwrap();
        // Skip the filter's edge transients.
        let trim = 400;
        let inner = &out[trim..out.len() - trim];
        prop_assert!(relative_close(rms(inner), rms(&input), 0.05), "{} vs {}", rms(inner), rms(&input));
    }

    #[test]
    fn noise_never_lowers_entropy(seed in 0u64..1000, freq in 100.0f64..4000.0) {
        let tone = sine(freq, 0.5, 2.0, RATE);
        let hiss = white_noise(seed, 1.0, tone.len());
        let mut last = f64::NEG_INFINITY;
        for level in [0.0, 0.001, 0.01, 0.05, 0.1, 0.3, 0.5] {
            let mixed: Vec<f64> = tone.iter().zip(&hiss).map(|(t, n)| t + level * n).collect();
            let e = timbre_subfeatures(&mixed).entropy;
            prop_assert!(e >= last - 1e-12, "entropy fell from {last} to {e} at noise {level}");
            last = e;
        }
    }
}

#[test]
fn stationary_signals_give_steady_rows() {
    let tone_and_hiss: Vec<f64> = sine(440.0, 0.5, 40.0, RATE)
        .iter()
        .zip(white_noise(3, 0.1, 640_000))
        .map(|(a, b)| a + b)
        .collect();
    let rows = extract_features(&mono(tone_and_hiss, 16_000), "s").rows;
    for c in 0..6 {
        let column: Vec<f64> = rows.iter().map(|r| r.values()[c]).collect();
        assert!(coefficient_of_variation(&column) < 0.02, "column {c}: {column:?}");
    }

    let beat = busy_signal(4, 100.0, 0.05, 40.0);
    let rows = extract_features(&mono(beat, 16_000), "b").rows;
    for c in 0..11 {
        let column: Vec<f64> = rows.iter().map(|r| r.values()[c]).collect();
        assert!(coefficient_of_variation(&column) < 0.02, "column {c}: {column:?}");
    }
}

#[test]
fn sine_windows_are_identical() {
    let rows = extract_features(&mono(sine(440.0, 1.0, 30.0, RATE), 16_000), "s").rows;
    assert_eq!(rows.len(), 3);
    for row in &rows[1..] {
        for (a, b) in row.values().iter().zip(rows[0].values()) {
            assert!(relative_close(*a, b, 1e-6) || (a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}

#[test]
fn loud_and_quiet_blocks_alternate() {
    let mut signal = Vec::new();
    for block in 0..6 {
        let amp = if block % 2 == 0 { 0.9 } else { 0.1 };
        signal.extend(sine(440.0, amp, 10.0, RATE));
    }
    let rows = extract_features(&mono(signal, 16_000), "blocks").rows;
    assert_eq!(rows.len(), 6);
    for pair in rows.windows(2) {
        let (a, b) = (pair[0].rms, pair[1].rms);
        if pair[0].window_index % 2 == 0 {
            assert!(a > b);
        } else {
            assert!(a < b);
        }
    }
}
