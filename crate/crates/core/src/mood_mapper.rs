//! Turns a song's feature matrix into intensity, timbre and rhythm scores on
//! the (-10, 10) scale and from there into a point on the mood plane.
//!
//! Steps, per song:
//! 1. min-max normalize every sub-feature column across windows to 0..100;
//! 2. combine sub-features into one parent value per window;
//! 3. divide each parent column by its maximum (max becomes 100), map
//!    affinely onto -10..10 and average across windows;
//! 4. arousal is the intensity score, valence blends timbre and rhythm with
//!    weights chosen by the arousal half-plane.

use crate::features::FeatureMatrix;
use crate::mood::{map_quadrant, MoodLabel, MoodPoint};

/// Value assigned to every element of a column with no spread.
pub const CONSTANT_COLUMN_VALUE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SongFeatureSummary {
    pub intensity: f64,
    pub timbre: f64,
    pub rhythm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AudioMood {
    pub summary: SongFeatureSummary,
    pub point: MoodPoint,
    pub label: MoodLabel,
}

/// `(v - min) / (max - min) * 100`; a constant column maps to 50.
pub fn minmax_normalize(column: &[f64]) -> Vec<f64> {
    let min = column.iter().copied().fold(f64::INFINITY, f64::min);
    let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    if span.is_nan() || span <= 0.0 {
        return vec![CONSTANT_COLUMN_VALUE; column.len()];
    }
    column
        .iter()
        .map(|v| ((v - min) / span * 100.0).clamp(0.0, 100.0))
        .collect()
}

pub fn parent_intensity(rms: f64, low_energy: f64) -> f64 {
    rms * 0.8 + (100.0 - low_energy) * 0.2
}

pub fn parent_timbre(zero_cross: f64, centroid: f64, rolloff: f64, entropy: f64) -> f64 {
    zero_cross * 0.2 + centroid * 0.4 + rolloff * 0.3 + entropy * 0.1
}

/// Weights total 1.05, so the result is clamped to 100.
pub fn parent_rhythm(beat: f64, tempo: f64, regularity: f64, pos: f64, neg: f64) -> f64 {
    (beat * 0.25 + tempo * 0.45 + regularity * 0.2 + (pos + neg) * 0.05).min(100.0)
}

/// Rescales a parent column so its maximum is 100, maps each value onto
/// `W / 5 - 10` and returns the mean. An all-zero column scores -10.
pub fn rescale_and_average(parent: &[f64]) -> f64 {
    let max = parent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = parent
        .iter()
        .map(|f| if max > 0.0 { f / max * 100.0 } else { 0.0 })
        .map(|w| w / 5.0 - 10.0)
        .collect();
    scaled.iter().sum::<f64>() / scaled.len() as f64
}

/// Timbre dominates in the low-arousal half, rhythm in the high half
/// (arousal of exactly 0 counts as high).
pub fn compute_valence(timbre: f64, rhythm: f64, arousal: f64) -> f64 {
    if arousal < 0.0 {
        timbre * 0.7 + rhythm * 0.3
    } else {
        timbre * 0.3 + rhythm * 0.7
    }
}

pub fn analyze_audio(matrix: &FeatureMatrix) -> AudioMood {
    assert!(!matrix.rows.is_empty(), "feature matrix has no windows");
    let normalized: Vec<Vec<f64>> = (0..11).map(|c| minmax_normalize(&matrix.column(c))).collect();
    let col = |c: usize, w: usize| normalized[c][w];

    let windows = matrix.rows.len();
    let intensity: Vec<f64> = (0..windows).map(|w| parent_intensity(col(0, w), col(1, w))).collect();
    let timbre: Vec<f64> = (0..windows)
        .map(|w| parent_timbre(col(2, w), col(3, w), col(4, w), col(5, w)))
        .collect();
    let rhythm: Vec<f64> = (0..windows)
        .map(|w| parent_rhythm(col(6, w), col(7, w), col(8, w), col(9, w), col(10, w)))
        .collect();

    let summary = SongFeatureSummary {
        intensity: rescale_and_average(&intensity),
        timbre: rescale_and_average(&timbre),
        rhythm: rescale_and_average(&rhythm),
    };
    let arousal = summary.intensity;
    let point = MoodPoint::new(compute_valence(summary.timbre, summary.rhythm, arousal), arousal);
    AudioMood {
        summary,
        point,
        label: map_quadrant(point),
    }
}
