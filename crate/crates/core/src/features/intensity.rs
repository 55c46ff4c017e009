use super::{rms, subframe_rms};

/// Fraction of the mean sub-frame RMS below which a sub-frame counts as
/// low-energy.
pub const LOW_ENERGY_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intensity {
    pub rms: f64,
    pub low_energy: f64,
}

pub fn intensity_subfeatures(window: &[f64]) -> Intensity {
    let frames = subframe_rms(window);
    let mean = frames.iter().sum::<f64>() / frames.len() as f64;
    let threshold = LOW_ENERGY_RATIO * mean;
    let low = frames.iter().filter(|&&r| r < threshold).count();
    Intensity {
        rms: rms(window),
        low_energy: 100.0 * low as f64 / frames.len() as f64,
    }
}
