#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::RngExt;
use proptest::test_runner::{RngAlgorithm, TestRng};

pub const RATE: u32 = 16_000;
pub const BLOCK: usize = 10 * RATE as usize;

pub fn moodtag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moodtag"))
        .args(args)
        .output()
        .expect("run moodtag")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn write_wav(path: &Path, channels: u16, rate: u32, samples: &[f64]) {
    let spec = hound::WavSpec {
        channels,
        sample_rate: rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut w = hound::WavWriter::create(path, spec).unwrap();
    for s in samples {
        w.write_sample((s.clamp(-1.0, 1.0) * 32767.0).round() as i16).unwrap();
    }
    w.finalize().unwrap();
}

/// One ten-second block of uniform white noise in [-level, level].
pub fn noise_block(level: f64, seed: u64) -> Vec<f64> {
    noise(seed, BLOCK).iter().map(|n| n * level).collect()
}

fn noise(seed: u64, n: usize) -> Vec<f64> {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = TestRng::from_seed(RngAlgorithm::ChaCha, &bytes);
    (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
}

/// One ten-second block of decaying clicks at `bpm` mixed with white noise.
pub fn energetic_block(bpm: f64, noise_level: f64, seed: u64) -> Vec<f64> {
    let period = 60.0 / bpm * RATE as f64;
    let mut out = noise_block(noise_level, seed);
    let mut beat = 0;
    while ((beat as f64) * period).round() as usize + 80 <= BLOCK {
        let start = ((beat as f64) * period).round() as usize;
        for j in 0..80 {
            out[start + j] += (-(j as f64) / 20.0).exp();
        }
        beat += 1;
    }
    out.iter().map(|x| x.clamp(-1.0, 1.0)).collect()
}

pub fn sine_block(freq: f64, amplitude: f64) -> Vec<f64> {
    (0..BLOCK)
        .map(|i| amplitude * (2.0 * PI * freq * i as f64 / RATE as f64).sin())
        .collect()
}

/// Thirty seconds of full-scale 120 BPM clicks over bright noise. Every
/// window is the same block, so every feature column is constant.
pub fn exuberant_audio() -> Vec<f64> {
    energetic_block(120.0, 0.4, 1).repeat(3)
}

/// A ten-second energetic intro followed by fifty seconds of a quiet
/// 100 Hz sine. The quiet windows are identical, so they sit at the
/// bottom of every loudness, brightness and rhythm column.
pub fn depressed_audio() -> Vec<f64> {
    let mut out = energetic_block(120.0, 0.4, 2);
    out.extend(sine_block(100.0, 0.05).repeat(5));
    out
}

pub const POSITIVE_LYRICS: &str = "Smiling brothers, made glad by the sun\n\
    happy and joyful, we dance and we win\n\
    love and laughter, proud of what we have done\n";

pub const NEGATIVE_LYRICS: &str = "Not glad, without brothers, alone in the night\n\
    tears and sorrow, the pain of the dead\n\
    lonely and broken, I cry and I weep\n";

/// Writes `<dir>/<name>.wav` (and `<name>.txt` lyrics when given).
pub fn song(dir: &Path, name: &str, audio: &[f64], lyrics: Option<&str>) -> PathBuf {
    let wav = dir.join(format!("{name}.wav"));
    write_wav(&wav, 1, RATE, audio);
    if let Some(text) = lyrics {
        std::fs::write(dir.join(format!("{name}.txt")), text).unwrap();
    }
    wav
}
