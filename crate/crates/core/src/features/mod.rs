//! Per-window sub-feature extraction.
//!
//! A canonical clip is cut into ten-second windows and each window yields
//! eleven raw sub-features: two for intensity, four for timbre and five for
//! rhythm.

mod intensity;
mod rhythm;
mod timbre;

use std::io::Write;

use rayon::prelude::*;

use crate::audio_io::{AudioClip, CANONICAL_RATE};

pub use intensity::{intensity_subfeatures, Intensity};
pub use rhythm::{onset_envelope, rhythm_subfeatures, Rhythm};
pub use timbre::{timbre_subfeatures, Timbre};

/// Analysis window length in samples (10 s at 16 kHz).
pub const WINDOW_SAMPLES: usize = 10 * CANONICAL_RATE as usize;
/// Sub-frame length shared by the intensity, spectral and onset analyses.
pub const SUBFRAME: usize = 512;

/// Column names in CSV order.
pub const COLUMNS: [&str; 11] = [
    "rms",
    "low_energy",
    "zero_cross",
    "centroid",
    "rolloff",
    "entropy",
    "beat_strength",
    "tempo",
    "regularity",
    "pos_autocorr",
    "neg_autocorr",
];

#[derive(Debug, Clone, PartialEq)]
pub struct WindowFeatureRow {
    pub window_index: usize,
    /// Linear RMS amplitude.
    pub rms: f64,
    /// Percentage of 512-sample sub-frames below half the mean sub-frame RMS.
    pub low_energy: f64,
    /// Sign changes per second.
    pub zero_cross: f64,
    /// Hz.
    pub centroid: f64,
    /// Hz.
    pub rolloff: f64,
    /// Normalized spectral entropy in [0, 1].
    pub entropy: f64,
    pub beat_strength: f64,
    /// Beats per minute; `None` when the window has no onsets.
    pub tempo: Option<f64>,
    pub regularity: f64,
    pub pos_autocorr: f64,
    pub neg_autocorr: f64,
}

impl WindowFeatureRow {
    fn from_parts(window_index: usize, i: Intensity, t: Timbre, r: Rhythm) -> Self {
        WindowFeatureRow {
            window_index,
            rms: i.rms,
            low_energy: i.low_energy,
            zero_cross: t.zero_cross,
            centroid: t.centroid,
            rolloff: t.rolloff,
            entropy: t.entropy,
            beat_strength: r.beat_strength,
            tempo: r.tempo,
            regularity: r.regularity,
            pos_autocorr: r.pos_autocorr,
            neg_autocorr: r.neg_autocorr,
        }
    }

    /// Values in [`COLUMNS`] order. An absent tempo is reported as 0.
    pub fn values(&self) -> [f64; 11] {
        [
            self.rms,
            self.low_energy,
            self.zero_cross,
            self.centroid,
            self.rolloff,
            self.entropy,
            self.beat_strength,
            self.tempo.unwrap_or(0.0),
            self.regularity,
            self.pos_autocorr,
            self.neg_autocorr,
        ]
    }

    /// Checks the documented value ranges.
    pub fn in_range(&self) -> bool {
        let nyquist = CANONICAL_RATE as f64 / 2.0;
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        self.values().iter().all(|v| v.is_finite())
            && self.rms >= 0.0
            && (0.0..=100.0).contains(&self.low_energy)
            && self.zero_cross >= 0.0
            && (0.0..=nyquist).contains(&self.centroid)
            && (0.0..=nyquist).contains(&self.rolloff)
            && unit(self.entropy)
            && self.beat_strength >= 0.0
            && self.tempo.is_none_or(|t| (30.0..=240.0).contains(&t))
            && unit(self.regularity)
            && unit(self.pos_autocorr)
            && unit(self.neg_autocorr)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub song_id: String,
    pub rows: Vec<WindowFeatureRow>,
}

impl FeatureMatrix {
    /// One column of raw values, in window order.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.values()[index]).collect()
    }

    /// Writes the matrix as CSV with a header row of [`COLUMNS`].
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(COLUMNS)?;
        for row in &self.rows {
            let mut fields: Vec<String> = row.values().iter().map(|v| v.to_string()).collect();
            if row.tempo.is_none() {
                fields[7] = String::new();
            }
            writer.write_record(&fields)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Splits samples into consecutive ten-second windows.
///
/// A trailing remainder of at least five seconds becomes its own short
/// window; a shorter remainder is merged into the previous window. Clips
/// shorter than ten seconds form a single window.
pub fn segment_windows(samples: &[f64]) -> Vec<&[f64]> {
    let full = samples.len() / WINDOW_SAMPLES;
    if full == 0 {
        return vec![samples];
    }
    let remainder = samples.len() % WINDOW_SAMPLES;
    let mut bounds: Vec<(usize, usize)> = (0..full)
        .map(|i| (i * WINDOW_SAMPLES, (i + 1) * WINDOW_SAMPLES))
        .collect();
    if remainder >= WINDOW_SAMPLES / 2 {
        bounds.push((full * WINDOW_SAMPLES, samples.len()));
    } else if remainder > 0 {
        bounds.last_mut().expect("at least one full window").1 = samples.len();
    }
    bounds.into_iter().map(|(s, e)| &samples[s..e]).collect()
}

/// Computes one feature row per window. Windows are processed in parallel
/// and reassembled in order.
pub fn extract_features(clip: &AudioClip, song_id: impl Into<String>) -> FeatureMatrix {
    debug_assert_eq!(clip.channels, 1);
    let rows = segment_windows(&clip.samples)
        .par_iter()
        .enumerate()
        .map(|(i, window)| extract_window(i, window))
        .collect();
    FeatureMatrix {
        song_id: song_id.into(),
        rows,
    }
}

fn extract_window(index: usize, window: &[f64]) -> WindowFeatureRow {
    WindowFeatureRow::from_parts(
        index,
        intensity_subfeatures(window),
        timbre_subfeatures(window),
        rhythm_subfeatures(window),
    )
}

/// RMS of consecutive non-overlapping 512-sample sub-frames. A window
/// shorter than one sub-frame yields a single value over the whole window.
pub(crate) fn subframe_rms(window: &[f64]) -> Vec<f64> {
    if window.len() < SUBFRAME {
        return vec![rms(window)];
    }
    window.chunks_exact(SUBFRAME).map(rms).collect()
}

pub(crate) fn rms(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}
