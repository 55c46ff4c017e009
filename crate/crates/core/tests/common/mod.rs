#![allow(dead_code)]

use std::f64::consts::PI;

use moodtag_core::CANONICAL_RATE;
use proptest::prelude::RngExt;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub const RATE: f64 = CANONICAL_RATE as f64;

pub fn rng(seed: u64) -> TestRng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    TestRng::from_seed(RngAlgorithm::ChaCha, &bytes)
}

pub fn sine(freq: f64, amplitude: f64, secs: f64, rate: f64) -> Vec<f64> {
    let n = (secs * rate).round() as usize;
    (0..n)
        .map(|i| amplitude * (2.0 * PI * freq * i as f64 / rate).sin())
        .collect()
}

/// Uniform white noise in [-amplitude, amplitude].
pub fn white_noise(seed: u64, amplitude: f64, n: usize) -> Vec<f64> {
    let mut r = rng(seed);
    (0..n).map(|_| amplitude * (r.random::<f64>() * 2.0 - 1.0)).collect()
}

/// Exponentially decaying bursts (80 samples, time constant 20 samples)
/// once per beat, starting at sample 0.
pub fn click_train(bpm: f64, secs: f64) -> Vec<f64> {
    let n = (secs * RATE).round() as usize;
    let period = 60.0 / bpm * RATE;
    let mut out = vec![0.0; n];
    let mut beat = 0usize;
    loop {
        let start = (beat as f64 * period).round() as usize;
        if start >= n {
            break;
        }
        for j in 0..80.min(n - start) {
            out[start + j] = (-(j as f64) / 20.0).exp();
        }
        beat += 1;
    }
    out
}

/// Power spectrum of one real frame by a direct O(N^2) DFT, bins 0..=N/2.
pub fn naive_power_spectrum(frame: &[f64]) -> Vec<f64> {
    let n = frame.len();
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, x) in frame.iter().enumerate() {
                let phase = -2.0 * PI * (k * t % n) as f64 / n as f64;
                re += x * phase.cos();
                im += x * phase.sin();
            }
            re * re + im * im
        })
        .collect()
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
