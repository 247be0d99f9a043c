//! Score binning, class rounding conventions and label histograms.

use serde::{Deserialize, Serialize};

use crate::data::types::{Aspect, PairSet};
use crate::error::{Error, Result};

/// Binary label from a continuous score: 1 iff `score > threshold`.
/// The comparison is strict; a score exactly at the threshold maps to 0.
pub fn bin_label(score: f64, threshold: f64) -> u8 {
    if score > threshold {
        1
    } else {
        0
    }
}

/// Convention for mapping a continuous score to an integer class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
#[derive(Default)]
pub enum Rounding {
    /// Nearest integer; exact .5 values round down (2.5 -> 2).
    #[default]
    HalfDown,
    /// Nearest integer; exact .5 values round up (2.5 -> 3).
    HalfUp,
    /// Nearest integer; exact .5 values round to the even neighbor.
    NearestEven,
}


impl Rounding {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "half-down" => Ok(Rounding::HalfDown),
            "half-up" => Ok(Rounding::HalfUp),
            "nearest-even" => Ok(Rounding::NearestEven),
            other => Err(Error::Format(format!("unknown rounding {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rounding::HalfDown => "half-down",
            Rounding::HalfUp => "half-up",
            Rounding::NearestEven => "nearest-even",
        }
    }

    /// Rounds any finite real to an integer-valued f64 under this convention.
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Rounding::HalfDown => (x - 0.5).ceil(),
            Rounding::HalfUp => (x + 0.5).floor(),
            Rounding::NearestEven => x.round_ties_even(),
        }
    }

    /// Maps a score in [1, 4] to its integer class in {1, 2, 3, 4}.
    pub fn to_class(self, score: f64) -> Result<u8> {
        if !score.is_finite() || !(1.0..=4.0).contains(&score) {
            return Err(Error::Range(format!("score {score} outside [1, 4]")));
        }
        Ok(self.apply(score) as u8)
    }
}

/// Nearest-integer class of a score in [1, 4]; exact halves round down.
/// This is the default convention everywhere a class is derived from a score.
pub fn round_half_down(score: f64) -> Result<u8> {
    Rounding::HalfDown.to_class(score)
}

/// Gold label counts over the 0.5 grid from 1.0 to 4.0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelHistogram {
    /// Counts for buckets 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0 in order.
    pub counts: [usize; 7],
    /// Pairs whose gold value is off the 0.5 grid.
    pub off_grid: Vec<String>,
    /// Pairs in the split lacking a gold value for the aspect.
    pub missing: usize,
    /// Pairs inspected; counts + off_grid + missing sums to this.
    pub total: usize,
}

impl LabelHistogram {
    /// Bucket values aligned with `counts`.
    pub const BUCKETS: [f64; 7] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
}

/// Tallies gold labels for one aspect over a split (`None` = all pairs).
pub fn label_histogram(pairs: &PairSet, aspect: &Aspect, split: Option<&str>) -> LabelHistogram {
    let mut counts = [0usize; 7];
    let mut off_grid = Vec::new();
    let mut missing = 0usize;
    let mut total = 0usize;
    for p in pairs.in_split(split) {
        total += 1;
        match p.gold.get(aspect) {
            None => missing += 1,
            Some(v) => {
                let doubled = v * 2.0;
                if doubled.fract() == 0.0 {
                    counts[(doubled as usize) - 2] += 1;
                } else {
                    off_grid.push(p.pair_id.clone());
                }
            }
        }
    }
    LabelHistogram {
        counts,
        off_grid,
        missing,
        total,
    }
}
