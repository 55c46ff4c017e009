use std::f64::consts::PI;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use super::SUBFRAME;
use crate::audio_io::CANONICAL_RATE;

/// Fraction of spectral energy that lies below the rolloff frequency.
pub const ROLLOFF_FRACTION: f64 = 0.85;
const HOP: usize = SUBFRAME / 2;
const BINS: usize = SUBFRAME / 2 + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timbre {
    pub zero_cross: f64,
    pub centroid: f64,
    pub rolloff: f64,
    pub entropy: f64,
}

pub fn timbre_subfeatures(window: &[f64]) -> Timbre {
    let zero_cross = zero_crossing_rate(window);
    let power = average_power_spectrum(window);
    let total: f64 = power.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Timbre {
            zero_cross,
            centroid: 0.0,
            rolloff: 0.0,
            entropy: 0.0,
        };
    }

    let centroid = power.iter().enumerate().map(|(k, p)| bin_hz(k) * p).sum::<f64>() / total;

    let target = ROLLOFF_FRACTION * total;
    let mut cumulative = 0.0;
    let mut rolloff_bin = BINS - 1;
    for (k, p) in power.iter().enumerate() {
        cumulative += p;
        if cumulative >= target {
            rolloff_bin = k;
            break;
        }
    }

    let entropy = -power
        .iter()
        .map(|p| p / total)
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
        / (BINS as f64).ln();

    Timbre {
        zero_cross,
        centroid: centroid.clamp(0.0, bin_hz(BINS - 1)),
        rolloff: bin_hz(rolloff_bin),
        entropy: entropy.clamp(0.0, 1.0),
    }
}

fn bin_hz(k: usize) -> f64 {
    k as f64 * CANONICAL_RATE as f64 / SUBFRAME as f64
}

/// Sign changes per second; zero counts as positive.
fn zero_crossing_rate(window: &[f64]) -> f64 {
    let crossings = window.windows(2).filter(|p| (p[0] >= 0.0) != (p[1] >= 0.0)).count();
    crossings as f64 * CANONICAL_RATE as f64 / window.len() as f64
}

/// Square of the magnitude spectrum averaged over Hann-windowed sub-frames
/// with 50% overlap. Windows shorter than one sub-frame are zero-padded.
fn average_power_spectrum(window: &[f64]) -> Vec<f64> {
    let fft = FftPlanner::<f64>::new().plan_fft_forward(SUBFRAME);
    let hann: Vec<f64> = (0..SUBFRAME)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / SUBFRAME as f64).cos())
        .collect();

    let starts: Vec<usize> = if window.len() <= SUBFRAME {
        vec![0]
    } else {
        (0..=window.len() - SUBFRAME).step_by(HOP).collect()
    };

    let mut magnitude = vec![0.0; BINS];
    let mut buf = vec![Complex::new(0.0, 0.0); SUBFRAME];
    for &start in &starts {
        for (i, slot) in buf.iter_mut().enumerate() {
            let x = window.get(start + i).copied().unwrap_or(0.0);
            *slot = Complex::new(x * hann[i], 0.0);
        }
        fft.process(&mut buf);
        for (m, c) in magnitude.iter_mut().zip(&buf[..BINS]) {
            *m += c.norm();
        }
    }
    let frames = starts.len() as f64;
    magnitude.iter().map(|m| (m / frames).powi(2)).collect()
}
