//! Refines the audio mood point with the lyric verdict and groups songs into
//! quadrant clusters.

use crate::lyrics::{LyricsVerdict, Polarity};
use crate::mood::{map_quadrant, MoodCategory, MoodLabel, MoodPoint, SCALE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusedResult {
    pub pre_fusion: MoodPoint,
    pub post_fusion: MoodPoint,
    pub audio_label: MoodLabel,
    pub final_label: MoodLabel,
    pub lyric_polarity: Polarity,
}

impl FusedResult {
    /// Result for a song without lyrics.
    pub fn audio_only(point: MoodPoint) -> Self {
        fuse_polarity(point, Polarity::Null)
    }
}

/// Shifts valence by +1 for lyrically positive songs and -1 for negative
/// ones, clamped to the scale. Arousal is never touched.
pub fn fuse(point: MoodPoint, verdict: &LyricsVerdict) -> FusedResult {
    fuse_polarity(point, verdict.polarity)
}

pub fn fuse_polarity(point: MoodPoint, polarity: Polarity) -> FusedResult {
    let shift = match polarity {
        Polarity::Positive => 1.0,
        Polarity::Negative => -1.0,
        Polarity::Null => 0.0,
    };
    let post = MoodPoint {
        valence: (point.valence + shift).clamp(-SCALE_LIMIT, SCALE_LIMIT),
        arousal: point.arousal,
    };
    FusedResult {
        pre_fusion: point,
        post_fusion: post,
        audio_label: map_quadrant(point),
        final_label: map_quadrant(post),
        lyric_polarity: polarity,
    }
}

/// Snaps a point to a pure quadrant by the sign of each axis, with zero
/// counted as positive.
pub fn snap_quadrant(point: MoodPoint) -> MoodCategory {
    match (point.valence >= 0.0, point.arousal >= 0.0) {
        (true, true) => MoodCategory::Q1,
        (true, false) => MoodCategory::Q2,
        (false, false) => MoodCategory::Q3,
        (false, true) => MoodCategory::Q4,
    }
}

/// Four quadrant playlists plus the songs that fell on a boundary band.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Clusters<T> {
    pub quadrants: [Vec<T>; 4],
    pub boundary: Vec<T>,
}

impl<T> Clusters<T> {
    pub fn quadrant(&self, q: u8) -> &[T] {
        &self.quadrants[(q - 1) as usize]
    }

    pub fn len(&self) -> usize {
        self.quadrants.iter().map(Vec::len).sum::<usize>() + self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Groups songs by final label, preserving input order within each list.
/// With `force_quadrant`, boundary songs are snapped with [`snap_quadrant`]
/// instead of being set aside.
pub fn cluster<T>(results: impl IntoIterator<Item = (T, FusedResult)>, force_quadrant: bool) -> Clusters<T> {
    let mut out = Clusters {
        quadrants: Default::default(),
        boundary: Vec::new(),
    };
    for (id, result) in results {
        let category = match result.final_label.category.quadrant() {
            Some(_) => result.final_label.category,
            None if force_quadrant => snap_quadrant(result.post_fusion),
            None => {
                out.boundary.push(id);
                continue;
            }
        };
        let q = category.quadrant().expect("pure quadrant");
        out.quadrants[(q - 1) as usize].push(id);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lyrics::lyrics_verdict;

    #[test]
    fn positive_lyrics_move_boundary_song_into_q1() {
        let r = fuse(MoodPoint::new(0.5, 5.0), &lyrics_verdict(100.0, 100.0));
        assert_eq!(r.post_fusion, MoodPoint::new(1.5, 5.0));
        assert_eq!(r.audio_label.category, MoodCategory::Q14);
        assert_eq!(r.final_label.category, MoodCategory::Q1);
    }

    #[test]
    fn negative_lyrics_move_song_into_q3() {
        let r = fuse(MoodPoint::new(-0.5, -5.0), &lyrics_verdict(0.0, 0.0));
        assert_eq!(r.post_fusion.valence, -1.5);
        assert_eq!(r.final_label.category, MoodCategory::Q3);
    }

    #[test]
    fn null_lyrics_are_identity() {
        let p = MoodPoint::new(3.3, -7.1);
        let r = fuse(p, &lyrics_verdict(50.0, 50.0));
        assert_eq!(r.post_fusion, p);
        assert_eq!(r.audio_label, r.final_label);
    }

    #[test]
    fn shift_saturates_at_scale_edge() {
        let r = fuse_polarity(MoodPoint::new(9.6, 2.0), Polarity::Positive);
        assert_eq!(r.post_fusion.valence, 10.0);
    }

    #[test]
    fn empty_and_single_clusters() {
        let empty = cluster(Vec::<(String, FusedResult)>::new(), false);
        assert!(empty.quadrants.iter().all(Vec::is_empty));
        assert!(empty.boundary.is_empty());

        let one = cluster([("a", FusedResult::audio_only(MoodPoint::new(5.0, 5.0)))], false);
        assert_eq!(one.quadrant(1), &["a"]);
        assert_eq!(one.len(), 1);
    }

    #[test]
    fn forcing_snaps_boundary_songs() {
        let dreamy = FusedResult::audio_only(MoodPoint::new(0.5, -3.0));
        assert_eq!(dreamy.final_label.category, MoodCategory::Q23);
        let kept = cluster([("s", dreamy)], false);
        assert_eq!(kept.boundary, vec!["s"]);
        let forced = cluster([("s", dreamy)], true);
        assert_eq!(forced.quadrant(2), &["s"]);
        assert!(forced.boundary.is_empty());
        assert_eq!(snap_quadrant(MoodPoint::new(0.0, 0.0)), MoodCategory::Q1);
        assert_eq!(snap_quadrant(MoodPoint::new(-0.2, 0.3)), MoodCategory::Q4);
    }
}
