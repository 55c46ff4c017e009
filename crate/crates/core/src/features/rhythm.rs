//! Rhythm sub-features from the autocorrelation of an energy-flux onset
//! envelope.
//!
//! The envelope is sampled every 512 samples (31.25 Hz), so a beat period is
//! rarely a whole number of envelope frames and its autocorrelation peak is
//! split across two neighbouring lags. Peaks are therefore scored by the
//! combined height of adjacent lag pairs and located at the pair's centroid.

use super::{subframe_rms, SUBFRAME};
use crate::audio_io::CANONICAL_RATE;

pub const MIN_BPM: f64 = 30.0;
pub const MAX_BPM: f64 = 240.0;
/// Envelope increments below this fraction of the mean sub-frame RMS are
/// treated as ripple rather than onsets.
pub const ONSET_GATE: f64 = 0.1;
/// A shorter lag is preferred over the strongest one when its peak reaches
/// this fraction of the strongest.
pub const OCTAVE_PREFERENCE: f64 = 0.9;
const REGULARITY_MULTIPLES: [f64; 3] = [2.0, 3.0, 4.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rhythm {
    pub beat_strength: f64,
    pub tempo: Option<f64>,
    pub regularity: f64,
    pub pos_autocorr: f64,
    pub neg_autocorr: f64,
}

impl Rhythm {
    const NONE: Rhythm = Rhythm {
        beat_strength: 0.0,
        tempo: None,
        regularity: 0.0,
        pos_autocorr: 0.0,
        neg_autocorr: 0.0,
    };
}

fn frame_rate() -> f64 {
    CANONICAL_RATE as f64 / SUBFRAME as f64
}

/// Half-wave rectified frame-to-frame increase of sub-frame RMS, with
/// increments under the onset gate zeroed.
pub fn onset_envelope(window: &[f64]) -> Vec<f64> {
    let frames = subframe_rms(window);
    let mean = frames.iter().sum::<f64>() / frames.len() as f64;
    let gate = ONSET_GATE * mean;
    frames
        .windows(2)
        .map(|p| {
            let rise = p[1] - p[0];
            if rise > gate {
                rise
            } else {
                0.0
            }
        })
        .collect()
}

/// Normalized autocorrelation of the mean-removed sequence, `a[0] == 1`.
/// Returns `None` when the sequence has no variance.
fn autocorrelation(x: &[f64]) -> Option<Vec<f64>> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    let centred: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let energy: f64 = centred.iter().map(|v| v * v).sum();
    if energy.is_nan() || energy <= 0.0 {
        return None;
    }
    Some(
        (0..centred.len())
            .map(|lag| {
                centred[..centred.len() - lag]
                    .iter()
                    .zip(&centred[lag..])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / energy
            })
            .collect(),
    )
}

pub fn rhythm_subfeatures(window: &[f64]) -> Rhythm {
    let envelope = onset_envelope(window);
    let rate = frame_rate();
    // Lags whose pair (k, k + 1) stays inside 0.25 s .. 2 s.
    let lo = (rate * 60.0 / MAX_BPM).ceil() as usize;
    let hi = (rate * 60.0 / MIN_BPM).floor() as usize;
    if envelope.len() <= lo + 1 {
        return Rhythm::NONE;
    }
    let Some(a) = autocorrelation(&envelope) else {
        return Rhythm::NONE;
    };
    let hi = hi.min(a.len() - 1);
    let search = &a[lo..=hi];

    let positive: Vec<f64> = search.iter().copied().filter(|&v| v > 0.0).collect();
    let negative: Vec<f64> = search.iter().copied().filter(|&v| v < 0.0).map(f64::abs).collect();
    let mean_or_zero = |v: &[f64]| {
        if v.is_empty() {
            0.0
        } else {
            v.iter().sum::<f64>() / v.len() as f64
        }
    };
    let pos_autocorr = mean_or_zero(&positive).min(1.0);
    let neg_autocorr = mean_or_zero(&negative).min(1.0);

    let mass = |k: usize| a[k].max(0.0) + a.get(k + 1).map_or(0.0, |v| v.max(0.0));
    let masses: Vec<f64> = (lo..hi).map(mass).collect();
    let top = masses.iter().copied().fold(0.0, f64::max);
    // Multiples of the beat period score almost as high as the period
    // itself; the shortest lag close to the top wins, then climbs to its
    // local maximum.
    let best = masses
        .iter()
        .position(|&m| m > 0.0 && m >= OCTAVE_PREFERENCE * top)
        .map(|mut i| {
            while i + 1 < masses.len() && masses[i + 1] > masses[i] {
                i += 1;
            }
            (lo + i, masses[i])
        });
    let Some((k, peak_mass)) = best else {
        return Rhythm {
            pos_autocorr,
            neg_autocorr,
            ..Rhythm::NONE
        };
    };

    let (w0, w1) = (a[k].max(0.0), a[k + 1].max(0.0));
    let lag = (k as f64 * w0 + (k + 1) as f64 * w1) / (w0 + w1);
    let tempo = (60.0 * rate / lag).clamp(MIN_BPM, MAX_BPM);

    let echoes: Vec<f64> = REGULARITY_MULTIPLES
        .iter()
        .map(|m| m * lag)
        .filter(|&l| (l.ceil() as usize) < a.len())
        .map(|l| {
            let base = l.floor() as usize;
            // The echo may be split either side of its fractional lag.
            let left = mass(base.saturating_sub(1));
            let right = mass(base);
            left.max(right)
        })
        .collect();
    let regularity = if echoes.is_empty() {
        0.0
    } else {
        (echoes.iter().sum::<f64>() / echoes.len() as f64).clamp(0.0, 1.0)
    };

    Rhythm {
        beat_strength: peak_mass.min(1.0),
        tempo: Some(tempo),
        regularity,
        pos_autocorr,
        neg_autocorr,
    }
}
