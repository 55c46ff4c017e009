//! WAV decoding and conversion to the canonical analysis format
//! (16 kHz, mono, amplitudes in [-1, 1]).

use std::f64::consts::PI;
use std::io::Read;
use std::path::{Path, PathBuf};

use hound::{SampleFormat, WavReader};
use thiserror::Error;

/// Sample rate every clip is converted to before feature extraction.
pub const CANONICAL_RATE: u32 = 16_000;

/// Zero crossings of the sinc kernel kept on each side of the centre.
const SINC_ZERO_CROSSINGS: f64 = 24.0;
/// Anti-aliasing cutoff as a fraction of the lower Nyquist frequency.
const SINC_ROLLOFF: f64 = 0.95;
const KAISER_BETA: f64 = 8.0;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("unsupported codec: {0}")]
    UnsupportedCodec(String),
    #[error("malformed WAV header: {0}")]
    MalformedHeader(String),
    #[error("audio contains no frames")]
    EmptyAudio,
    #[error("cannot resample from {0} Hz")]
    ResampleFailure(u32),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Decoded audio. `samples` is interleaved when `channels > 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    pub samples: Vec<f64>,
    pub channels: u16,
    pub sample_rate: u32,
    pub source_path: PathBuf,
}

impl AudioClip {
    /// Builds a mono clip at the canonical rate.
    pub fn mono(samples: Vec<f64>, source_path: impl Into<PathBuf>) -> Self {
        AudioClip {
            samples,
            channels: 1,
            sample_rate: CANONICAL_RATE,
            source_path: source_path.into(),
        }
    }

    pub fn frames(&self) -> usize {
        if self.channels == 0 {
            0
        } else {
            self.samples.len() / self.channels as usize
        }
    }

    pub fn duration_secs(&self) -> f64 {
        self.frames() as f64 / self.sample_rate as f64
    }

    pub fn is_canonical(&self) -> bool {
        self.channels == 1
            && self.sample_rate == CANONICAL_RATE
            && !self.samples.is_empty()
            && self.samples.iter().all(|s| (-1.0..=1.0).contains(s))
    }
}

fn map_hound(err: hound::Error) -> AudioError {
    match err {
        hound::Error::IoError(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => {
            AudioError::MalformedHeader(e.to_string())
        }
        hound::Error::IoError(e) => AudioError::Io(e),
        hound::Error::FormatError(msg) => AudioError::MalformedHeader(msg.to_string()),
        hound::Error::UnfinishedSample => AudioError::MalformedHeader("data chunk ends mid-sample".into()),
        hound::Error::Unsupported => AudioError::UnsupportedCodec("non-PCM format".into()),
        hound::Error::TooWide => AudioError::UnsupportedCodec("sample width above 32 bits".into()),
        hound::Error::InvalidSampleFormat => AudioError::UnsupportedCodec("invalid sample format".into()),
    }
}

/// Decodes a RIFF/WAVE file with integer PCM (8/16/24/32-bit) or 32-bit
/// float samples. Channels are kept interleaved.
pub fn decode_wav(path: impl AsRef<Path>) -> Result<AudioClip, AudioError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    let mut clip = decode_wav_reader(std::io::BufReader::new(file))?;
    clip.source_path = path.to_path_buf();
    Ok(clip)
}

/// Same as [`decode_wav`] over any reader; `source_path` is left empty.
pub fn decode_wav_reader<R: Read>(reader: R) -> Result<AudioClip, AudioError> {
    let reader = WavReader::new(reader).map_err(map_hound)?;
    let spec = reader.spec();
    if spec.channels == 0 {
        return Err(AudioError::MalformedHeader("zero channels".into()));
    }
    if spec.sample_rate == 0 {
        return Err(AudioError::MalformedHeader("zero sample rate".into()));
    }

    let samples: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(|v| (v as f64).clamp(-1.0, 1.0)))
            .collect::<Result<_, _>>()
            .map_err(map_hound)?,
        (SampleFormat::Float, bits) => return Err(AudioError::UnsupportedCodec(format!("{bits}-bit float"))),
        (SampleFormat::Int, bits @ (8 | 16 | 24 | 32)) => {
            let full_scale = (1u64 << (bits - 1)) as f64;
            reader
                .into_samples::<i32>()
                .map(|s| s.map(|v| v as f64 / full_scale))
                .collect::<Result<_, _>>()
                .map_err(map_hound)?
        }
        (SampleFormat::Int, bits) => return Err(AudioError::UnsupportedCodec(format!("{bits}-bit integer PCM"))),
    };

    if samples.len() < spec.channels as usize {
        return Err(AudioError::EmptyAudio);
    }

    Ok(AudioClip {
        samples,
        channels: spec.channels,
        sample_rate: spec.sample_rate,
        source_path: PathBuf::new(),
    })
}

/// Averages channels to mono and resamples to [`CANONICAL_RATE`].
///
/// A clip that is already mono at 16 kHz comes back unchanged, which makes
/// the operation idempotent.
pub fn canonicalize(clip: &AudioClip) -> Result<AudioClip, AudioError> {
    if clip.sample_rate == 0 {
        return Err(AudioError::ResampleFailure(0));
    }
    if clip.channels == 0 || clip.frames() == 0 {
        return Err(AudioError::EmptyAudio);
    }

    let mono = downmix(&clip.samples, clip.channels as usize);
    let mut samples = if clip.sample_rate == CANONICAL_RATE {
        mono
    } else {
        resample(&mono, clip.sample_rate, CANONICAL_RATE)?
    };
    for s in samples.iter_mut() {
        *s = s.clamp(-1.0, 1.0);
    }

    Ok(AudioClip {
        samples,
        channels: 1,
        sample_rate: CANONICAL_RATE,
        source_path: clip.source_path.clone(),
    })
}

fn downmix(interleaved: &[f64], channels: usize) -> Vec<f64> {
    if channels == 1 {
        return interleaved.to_vec();
    }
    interleaved
        .chunks_exact(channels)
        .map(|frame| frame.iter().sum::<f64>() / channels as f64)
        .collect()
}

/// Band-limited resampling with a Kaiser-windowed sinc kernel.
///
/// Output length is `round(len * to / from)` (at least one sample), so the
/// duration changes by at most half an output sample period.
pub fn resample(input: &[f64], from: u32, to: u32) -> Result<Vec<f64>, AudioError> {
    if from == 0 || to == 0 {
        return Err(AudioError::ResampleFailure(from));
    }
    if input.is_empty() {
        return Err(AudioError::EmptyAudio);
    }
    if from == to {
        return Ok(input.to_vec());
    }

    let ratio = to as f64 / from as f64;
    let out_len = ((input.len() as f64 * ratio).round() as usize).max(1);
    // Cutoff in cycles per input sample, relative to the input Nyquist.
    let cutoff = SINC_ROLLOFF * ratio.min(1.0);
    let half_width = SINC_ZERO_CROSSINGS / cutoff;
    let norm = bessel_i0(KAISER_BETA);
    let step = from as f64 / to as f64;

    let out = (0..out_len)
        .map(|n| {
            let centre = n as f64 * step;
            let lo = (centre - half_width).ceil().max(0.0) as usize;
            let hi = ((centre + half_width).floor() as usize).min(input.len() - 1);
            let mut acc = 0.0;
            for (k, &x) in input.iter().enumerate().take(hi + 1).skip(lo) {
                let t = k as f64 - centre;
                let r = t / half_width;
                let window = bessel_i0(KAISER_BETA * (1.0 - r * r).max(0.0).sqrt()) / norm;
                acc += x * cutoff * sinc(cutoff * t) * window;
            }
            acc
        })
        .collect();
    Ok(out)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= half / k as f64;
        let sq = term * term;
        sum += sq;
        if sq < sum * 1e-17 {
            break;
        }
    }
    sum
}
