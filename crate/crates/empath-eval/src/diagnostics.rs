//! Failure analyses over joined predictions and gold scores: severe-error
//! counts by gold bucket, the empirical class distribution, per-class
//! probability profiles against it, and confusion matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{Aspect, PairSet, PredictionRecord, PredictionSet, Rounding};
use crate::error::{Error, Result};
use crate::stats::EvalConfig;

/// The 0.5-grid buckets gold scores fall into.
pub const GOLD_BUCKETS: [f64; 7] = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];

/// One gold bucket: how many pairs landed there and how many of their
/// predictions missed by more than the severe threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SevereErrorRow {
    pub bucket: f64,
    pub total: usize,
    pub errors: usize,
}

/// Severe-error counts per gold bucket. Every bucket row is present even
/// when empty; errors <= total holds per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SevereErrorTable {
    pub delta: f64,
    pub n: usize,
    pub rows: Vec<SevereErrorRow>,
    pub warnings: Vec<String>,
}

/// Joins predictions to gold scores for one aspect. Unmatched predictions
/// and pairs without the aspect become warnings; duplicate pair ids are
/// rejected so multi-variant files are aggregated before analysis.
fn join_gold<'a>(
    preds: &'a PredictionSet,
    pairs: &PairSet,
    aspect: &Aspect,
) -> Result<(Vec<(&'a PredictionRecord, f64)>, Vec<String>)> {
    let mut joined = Vec::new();
    let mut warnings = Vec::new();
    let mut last_id: Option<&str> = None;
    for rec in preds.iter().filter(|r| &r.aspect == aspect) {
        if last_id == Some(rec.pair_id.as_str()) {
            return Err(Error::Duplicate(format!(
                "multiple predictions for pair {:?}; aggregate swap variants first",
                rec.pair_id
            )));
        }
        last_id = Some(rec.pair_id.as_str());
        match pairs.get(&rec.pair_id) {
            None => warnings.push(format!("pair {:?} not in pair set", rec.pair_id)),
            Some(pair) => match pair.gold.get(aspect) {
                None => warnings.push(format!(
                    "pair {:?} has no gold {aspect} score",
                    rec.pair_id
                )),
                Some(gold) => joined.push((rec, gold)),
            },
        }
    }
    Ok((joined, warnings))
}

/// Snaps a gold score onto the 0.5 grid; the flag reports that the score
/// was off-grid (assigned half-down to the nearest bucket).
fn gold_bucket(gold: f64) -> (f64, bool) {
    let doubled = gold * 2.0;
    if doubled.fract() == 0.0 {
        (gold.clamp(1.0, 4.0), false)
    } else {
        ((Rounding::HalfDown.apply(doubled) / 2.0).clamp(1.0, 4.0), true)
    }
}

/// Counts predictions whose absolute error strictly exceeds the severe
/// threshold, per gold bucket. A miss of exactly the threshold is not
/// severe.
pub fn severe_error_table(
    preds: &PredictionSet,
    pairs: &PairSet,
    aspect: &Aspect,
    config: &EvalConfig,
) -> Result<SevereErrorTable> {
    let (joined, mut warnings) = join_gold(preds, pairs, aspect)?;
    if joined.is_empty() {
        return Err(Error::Insufficient(
            "no predictions matched pairs with gold scores".into(),
        ));
    }
    let mut totals = [0usize; 7];
    let mut errors = [0usize; 7];
    for (rec, gold) in &joined {
        let (bucket, off_grid) = gold_bucket(*gold);
        if off_grid {
            warnings.push(format!(
                "pair {:?}: gold {gold} off the 0.5 grid, bucketed as {bucket}",
                rec.pair_id
            ));
        }
        let idx = GOLD_BUCKETS
            .iter()
            .position(|b| *b == bucket)
            .expect("bucket is on the grid");
        totals[idx] += 1;
        if (rec.score - gold).abs() > config.severe_delta {
            errors[idx] += 1;
        }
    }
    let rows = GOLD_BUCKETS
        .iter()
        .enumerate()
        .map(|(i, &bucket)| SevereErrorRow {
            bucket,
            total: totals[i],
            errors: errors[i],
        })
        .collect();
    Ok(SevereErrorTable {
        delta: config.severe_delta,
        n: joined.len(),
        rows,
        warnings,
    })
}

/// Class shares of gold scores in a split after rounding to integers.
pub fn empirical_distribution(
    pairs: &PairSet,
    aspect: &Aspect,
    split: Option<&str>,
    rounding: Rounding,
) -> Result<[f64; 4]> {
    let mut counts = [0usize; 4];
    let mut total = 0usize;
    for pair in pairs.in_split(split) {
        if let Some(gold) = pair.gold.get(aspect) {
            let class = rounding.to_class(gold)?;
            counts[(class - 1) as usize] += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::Insufficient(format!(
            "no gold {aspect} scores in split"
        )));
    }
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = counts[k] as f64 / total as f64;
    }
    Ok(out)
}

/// Mean predicted distribution for one gold class, with its distances to
/// the empirical class distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupProfile {
    pub gold_class: u8,
    pub n: usize,
    pub profile: [f64; 4],
    pub max_abs: f64,
    pub total_variation: f64,
    pub kl: f64,
}

/// Per-gold-class average of predicted class distributions. When every
/// group's profile sits on the empirical distribution, the predictor has
/// learned the label prior and nothing else.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityProfile {
    pub rounding: Rounding,
    pub n_used: usize,
    /// Gold-class distribution of the joined pairs themselves.
    pub empirical: [f64; 4],
    /// One entry per gold class that actually occurs, ascending.
    pub groups: Vec<GroupProfile>,
    pub warnings: Vec<String>,
}

fn total_variation(p: &[f64; 4], q: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for k in 0..4 {
        acc += (p[k] - q[k]).abs();
    }
    acc / 2.0
}

fn max_abs(p: &[f64; 4], q: &[f64; 4]) -> f64 {
    let mut m = 0.0f64;
    for k in 0..4 {
        m = m.max((p[k] - q[k]).abs());
    }
    m
}

/// KL(p || q) in nats; zero q cells are smoothed to 1e-12, zero p cells
/// contribute nothing.
fn kl_divergence(p: &[f64; 4], q: &[f64; 4]) -> f64 {
    let mut acc = 0.0;
    for k in 0..4 {
        if p[k] > 0.0 {
            acc += p[k] * (p[k] / q[k].max(1e-12)).ln();
        }
    }
    acc
}

/// Groups pairs by rounded gold class and averages the predicted class
/// distributions within each group. Every used prediction must carry a
/// distribution.
pub fn probability_profile(
    preds: &PredictionSet,
    pairs: &PairSet,
    aspect: &Aspect,
    rounding: Rounding,
) -> Result<ProbabilityProfile> {
    let (joined, warnings) = join_gold(preds, pairs, aspect)?;
    let missing: Vec<&str> = joined
        .iter()
        .filter(|(rec, _)| rec.probs.is_none())
        .map(|(rec, _)| rec.pair_id.as_str())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Domain(format!(
            "predictions without class distributions: {}",
            missing.join(", ")
        )));
    }
    if joined.is_empty() {
        return Err(Error::Insufficient(
            "no predictions matched pairs with gold scores".into(),
        ));
    }

    let mut by_class: BTreeMap<u8, Vec<&[f64; 4]>> = BTreeMap::new();
    let mut counts = [0usize; 4];
    for (rec, gold) in &joined {
        let class = rounding.to_class(*gold)?;
        counts[(class - 1) as usize] += 1;
        by_class
            .entry(class)
            .or_default()
            .push(rec.probs.as_ref().expect("checked above"));
    }
    let mut empirical = [0.0; 4];
    for k in 0..4 {
        empirical[k] = counts[k] as f64 / joined.len() as f64;
    }

    let mut groups = Vec::new();
    for (gold_class, members) in by_class {
        let mut profile = [0.0; 4];
        for probs in &members {
            for k in 0..4 {
                profile[k] += probs[k];
            }
        }
        for p in profile.iter_mut() {
            *p /= members.len() as f64;
        }
        groups.push(GroupProfile {
            gold_class,
            n: members.len(),
            profile,
            max_abs: max_abs(&profile, &empirical),
            total_variation: total_variation(&profile, &empirical),
            kl: kl_divergence(&profile, &empirical),
        });
    }
    Ok(ProbabilityProfile {
        rounding,
        n_used: joined.len(),
        empirical,
        groups,
        warnings,
    })
}

/// How a predicted class is read off a prediction record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConfusionMode {
    /// Largest entry of the class distribution; ties go to the lower class.
    ArgmaxProbs,
    /// The score clamped into [1, 4] and rounded.
    RoundedScore,
}

impl ConfusionMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "argmax-probs" => Ok(ConfusionMode::ArgmaxProbs),
            "rounded-score" => Ok(ConfusionMode::RoundedScore),
            other => Err(Error::Format(format!("unknown confusion mode {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConfusionMode::ArgmaxProbs => "argmax-probs",
            ConfusionMode::RoundedScore => "rounded-score",
        }
    }
}

/// Gold class by row, predicted class by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub mode: ConfusionMode,
    pub rounding: Rounding,
    pub n: usize,
    /// counts[gold - 1][predicted - 1]
    pub counts: [[usize; 4]; 4],
    pub warnings: Vec<String>,
}

fn argmax_class(probs: &[f64; 4]) -> u8 {
    let mut best = 0usize;
    for k in 1..4 {
        if probs[k] > probs[best] {
            best = k;
        }
    }
    (best + 1) as u8
}

/// Tabulates gold class against predicted class. An empty prediction set
/// gives the zero matrix.
pub fn confusion_matrix(
    preds: &PredictionSet,
    pairs: &PairSet,
    aspect: &Aspect,
    rounding: Rounding,
    mode: ConfusionMode,
) -> Result<ConfusionMatrix> {
    let (joined, mut warnings) = join_gold(preds, pairs, aspect)?;
    let mut counts = [[0usize; 4]; 4];
    let mut n = 0usize;
    for (rec, gold) in &joined {
        let predicted = match mode {
            ConfusionMode::ArgmaxProbs => match &rec.probs {
                Some(p) => argmax_class(p),
                None => {
                    warnings.push(format!(
                        "pair {:?}: no class distribution, skipped",
                        rec.pair_id
                    ));
                    continue;
                }
            },
            ConfusionMode::RoundedScore => rounding.to_class(rec.score.clamp(1.0, 4.0))?,
        };
        let g = rounding.to_class(*gold)?;
        counts[(g - 1) as usize][(predicted - 1) as usize] += 1;
        n += 1;
    }
    Ok(ConfusionMatrix {
        mode,
        rounding,
        n,
        counts,
        warnings,
    })
}
