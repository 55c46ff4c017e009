//! Points on the valence-arousal plane and the nine mood regions they fall
//! into.

use std::fmt;
use std::str::FromStr;

/// Magnitude below which an axis value is considered neither positive nor
/// negative.
pub const ZERO_BAND: f64 = 1.0;
pub const SCALE_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoodPoint {
    pub valence: f64,
    pub arousal: f64,
}

impl MoodPoint {
    pub fn new(valence: f64, arousal: f64) -> Self {
        MoodPoint { valence, arousal }
    }

    pub fn is_valid(&self) -> bool {
        in_scale(self.valence) && in_scale(self.arousal)
    }
}

pub(crate) fn in_scale(v: f64) -> bool {
    v.is_finite() && (-SCALE_LIMIT..=SCALE_LIMIT).contains(&v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisSign {
    Positive,
    Zero,
    Negative,
}

impl AxisSign {
    pub fn classify(v: f64) -> Self {
        if v >= ZERO_BAND {
            AxisSign::Positive
        } else if v <= -ZERO_BAND {
            AxisSign::Negative
        } else {
            AxisSign::Zero
        }
    }
}

/// Quadrants 1-4 plus the boundary bands between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoodCategory {
    Q1,
    Q2,
    Q3,
    Q4,
    Q12,
    Q23,
    Q34,
    Q14,
    Undetermined,
}

impl MoodCategory {
    pub const ALL: [MoodCategory; 9] = [
        MoodCategory::Q1,
        MoodCategory::Q2,
        MoodCategory::Q3,
        MoodCategory::Q4,
        MoodCategory::Q12,
        MoodCategory::Q23,
        MoodCategory::Q34,
        MoodCategory::Q14,
        MoodCategory::Undetermined,
    ];

    pub fn from_signs(valence: AxisSign, arousal: AxisSign) -> Self {
        use AxisSign::*;
        match (valence, arousal) {
            (Positive, Positive) => MoodCategory::Q1,
            (Positive, Negative) => MoodCategory::Q2,
            (Negative, Negative) => MoodCategory::Q3,
            (Negative, Positive) => MoodCategory::Q4,
            (Positive, Zero) => MoodCategory::Q12,
            (Zero, Negative) => MoodCategory::Q23,
            (Negative, Zero) => MoodCategory::Q34,
            (Zero, Positive) => MoodCategory::Q14,
            (Zero, Zero) => MoodCategory::Undetermined,
        }
    }

    pub fn descriptors(self) -> &'static str {
        match self {
            MoodCategory::Q1 => "Very happy, Exciting",
            MoodCategory::Q2 => "Soothing, Pleasure",
            MoodCategory::Q3 => "Sad, Depressing",
            MoodCategory::Q4 => "Frantic, Tense",
            MoodCategory::Q12 => "Serene, Happy",
            MoodCategory::Q23 => "Dreamy, Sad",
            MoodCategory::Q34 => "Sorrow, Disturbing",
            MoodCategory::Q14 => "Exciting, Disturbing",
            MoodCategory::Undetermined => "Nothing can be said",
        }
    }

    /// Quadrant number 1-4 for the four pure quadrants.
    pub fn quadrant(self) -> Option<u8> {
        match self {
            MoodCategory::Q1 => Some(1),
            MoodCategory::Q2 => Some(2),
            MoodCategory::Q3 => Some(3),
            MoodCategory::Q4 => Some(4),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MoodCategory::Q1 => "Q1",
            MoodCategory::Q2 => "Q2",
            MoodCategory::Q3 => "Q3",
            MoodCategory::Q4 => "Q4",
            MoodCategory::Q12 => "Q12",
            MoodCategory::Q23 => "Q23",
            MoodCategory::Q34 => "Q34",
            MoodCategory::Q14 => "Q14",
            MoodCategory::Undetermined => "Undetermined",
        }
    }
}

impl fmt::Display for MoodCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCategory(pub String);

impl fmt::Display for UnknownCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown mood category {:?}", self.0)
    }
}

impl std::error::Error for UnknownCategory {}

impl FromStr for MoodCategory {
    type Err = UnknownCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MoodCategory::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MoodLabel {
    pub category: MoodCategory,
}

impl MoodLabel {
    pub fn descriptors(&self) -> &'static str {
        self.category.descriptors()
    }
}

impl From<MoodCategory> for MoodLabel {
    fn from(category: MoodCategory) -> Self {
        MoodLabel { category }
    }
}

/// Selects the region of a point. Each axis is positive at or above 1,
/// negative at or below -1 and zero strictly in between.
pub fn map_quadrant(point: MoodPoint) -> MoodLabel {
    MoodCategory::from_signs(AxisSign::classify(point.valence), AxisSign::classify(point.arousal)).into()
}
