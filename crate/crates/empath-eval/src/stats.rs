//! Correlation and classification metrics over matched prediction/gold data.
//!
//! Degenerate computations (zero variance, saturated chance agreement) yield
//! `None` rather than a number or a panic, and that marker survives into
//! rendered reports. Summation is left-to-right over pair-id-sorted data, so
//! equal inputs give bit-equal outputs.

use serde::{Deserialize, Serialize};

use crate::data::{bin_label, Aspect, PairSet, PredictionSet, Rounding};
use crate::error::{Error, Result};

fn check_finite(name: &str, xs: &[f64]) -> Result<()> {
    if let Some(i) = xs.iter().position(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{name}[{i}] is not finite")));
    }
    Ok(())
}

fn check_same_len(xs: &[f64], ys: &[f64]) -> Result<()> {
    if xs.len() != ys.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    Ok(())
}

/// Pearson correlation via population (divide-by-n) moments.
/// Returns `None` when either input has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    check_same_len(xs, ys)?;
    check_finite("x", xs)?;
    check_finite("y", ys)?;
    let n = xs.len();
    if n < 2 {
        return Err(Error::Insufficient(format!(
            "correlation needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = xs.iter().sum::<f64>() / nf;
    let mean_y = ys.iter().sum::<f64>() / nf;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for i in 0..n {
        let dx = xs[i] - mean_x;
        let dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Ok(None);
    }
    let r = cov / (var_x.sqrt() * var_y.sqrt());
    Ok(Some(r.clamp(-1.0, 1.0)))
}

/// Average (fractional) ranks, 1-based; tied values share the mean of the
/// positions they span, so the tie average is exact in floating point.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        // positions i..=j are one tie group; mean of consecutive integers
        let rank = ((i + 1) + (j + 1)) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman correlation: Pearson over average ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Option<f64>> {
    check_same_len(xs, ys)?;
    check_finite("x", xs)?;
    check_finite("y", ys)?;
    pearson(&average_ranks(xs), &average_ranks(ys))
}

/// Mean squared error.
pub fn mse(preds: &[f64], golds: &[f64]) -> Result<f64> {
    check_same_len(preds, golds)?;
    check_finite("pred", preds)?;
    check_finite("gold", golds)?;
    if preds.is_empty() {
        return Err(Error::Insufficient("mse over empty input".into()));
    }
    let mut acc = 0.0;
    for i in 0..preds.len() {
        let d = preds[i] - golds[i];
        acc += d * d;
    }
    Ok(acc / preds.len() as f64)
}

/// Per-class precision, recall, F1 and support for one binary class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Binary classification metrics with macro and support-weighted averages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub accuracy: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub f1_macro: f64,
    pub f1_weighted: f64,
    /// Stats for class 0 then class 1.
    pub per_class: [ClassStats; 2],
}

/// Computes the binary report; inputs are 0/1 labels of equal length.
/// A class absent from gold has recall 0 and contributes 0 per-class F1.
pub fn classification_report(pred: &[u8], gold: &[u8]) -> Result<ClassificationReport> {
    if pred.len() != gold.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            pred.len(),
            gold.len()
        )));
    }
    if pred.is_empty() {
        return Err(Error::Insufficient("classification over empty input".into()));
    }
    for (i, v) in pred.iter().chain(gold.iter()).enumerate() {
        if *v > 1 {
            return Err(Error::Range(format!("label {v} at position {i} is not 0/1")));
        }
    }
    let n = pred.len();
    let mut agree = 0usize;
    let mut per_class = [ClassStats {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
        support: 0,
    }; 2];
    for c in 0..2u8 {
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fn_ = 0usize;
        let mut support = 0usize;
        for i in 0..n {
            if gold[i] == c {
                support += 1;
                if pred[i] == c {
                    tp += 1;
                } else {
                    fn_ += 1;
                }
            } else if pred[i] == c {
                fp += 1;
            }
        }
        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else {
            0.0
        };
        let recall = if tp + fn_ > 0 {
            tp as f64 / (tp + fn_) as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class[c as usize] = ClassStats {
            precision,
            recall,
            f1,
            support,
        };
    }
    for i in 0..n {
        if pred[i] == gold[i] {
            agree += 1;
        }
    }
    let nf = n as f64;
    Ok(ClassificationReport {
        accuracy: agree as f64 / nf,
        precision_macro: (per_class[0].precision + per_class[1].precision) / 2.0,
        recall_macro: (per_class[0].recall + per_class[1].recall) / 2.0,
        f1_macro: (per_class[0].f1 + per_class[1].f1) / 2.0,
        f1_weighted: (per_class[0].support as f64 * per_class[0].f1
            + per_class[1].support as f64 * per_class[1].f1)
            / nf,
        per_class,
    })
}

/// Knobs shared by evaluation and diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Binary label threshold; label is 1 iff score is strictly above it.
    pub bin_threshold: f64,
    /// Convention for deriving integer classes from continuous scores.
    pub rounding: Rounding,
    /// Multiplier applied to cosine similarity when scoring pairs.
    pub scale_factor: f64,
    /// An absolute prediction error strictly above this counts as severe.
    pub severe_delta: f64,
    /// Clamp scaled cosine scores into [1, 4]; off by default because the
    /// raw multiplication is what the evaluation tables reflect.
    pub clamp_scores: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            bin_threshold: 2.5,
            rounding: Rounding::HalfDown,
            scale_factor: 4.0,
            severe_delta: 1.0,
            clamp_scores: false,
        }
    }
}

/// Full metric suite for one aspect after joining predictions to gold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub aspect: Aspect,
    pub n: usize,
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub mse: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1_macro: f64,
    pub f1_weighted: f64,
    pub threshold: f64,
    pub warnings: Vec<String>,
}

/// Joins predictions to gold by pair id and computes the metric suite.
/// The prediction set must hold at most one record per pair for the aspect
/// (aggregate swap variants first). Unmatched predictions and pairs missing
/// gold become warnings; an empty join is an error.
pub fn evaluate(
    preds: &PredictionSet,
    pairs: &PairSet,
    aspect: &Aspect,
    config: &EvalConfig,
) -> Result<EvalReport> {
    let mut warnings = Vec::new();
    let mut scores = Vec::new();
    let mut golds = Vec::new();
    let mut last_pair: Option<&str> = None;
    for rec in preds.for_aspect(aspect) {
        if last_pair == Some(rec.pair_id.as_str()) {
            return Err(Error::Duplicate(format!(
                "pair {} has multiple {aspect} predictions; aggregate variants first",
                rec.pair_id
            )));
        }
        last_pair = Some(rec.pair_id.as_str());
        match pairs.get(&rec.pair_id) {
            None => warnings.push(format!("prediction for unknown pair {}", rec.pair_id)),
            Some(p) => match p.gold.get(aspect) {
                None => warnings.push(format!("pair {} has no {aspect} gold", rec.pair_id)),
                Some(g) => {
                    scores.push(rec.score);
                    golds.push(g);
                }
            },
        }
    }
    if scores.is_empty() {
        return Err(Error::Insufficient(format!(
            "no predictions matched a pair with {aspect} gold"
        )));
    }
    let soften = |res: Result<Option<f64>>| match res {
        Ok(v) => Ok(v),
        Err(Error::Insufficient(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let r = soften(pearson(&scores, &golds))?;
    let rho = soften(spearman(&scores, &golds))?;
    let mse = mse(&scores, &golds)?;
    let pred_bins: Vec<u8> = scores
        .iter()
        .map(|&s| bin_label(s, config.bin_threshold))
        .collect();
    let gold_bins: Vec<u8> = golds
        .iter()
        .map(|&g| bin_label(g, config.bin_threshold))
        .collect();
    let cls = classification_report(&pred_bins, &gold_bins)?;
    Ok(EvalReport {
        aspect: aspect.clone(),
        n: scores.len(),
        r,
        rho,
        mse,
        accuracy: cls.accuracy,
        precision: cls.precision_macro,
        recall: cls.recall_macro,
        f1_macro: cls.f1_macro,
        f1_weighted: cls.f1_weighted,
        threshold: config.bin_threshold,
        warnings,
    })
}

/// Pairwise-complete correlations between gold aspect columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AspectCorrelationMatrix {
    pub aspects: Vec<Aspect>,
    /// Pairs where both aspects are present, indexed `[i][j]`.
    pub n: Vec<Vec<usize>>,
    pub pearson: Vec<Vec<Option<f64>>>,
    pub spearman: Vec<Vec<Option<f64>>>,
}

/// Correlates every pair of gold aspect columns over pairs carrying both.
/// Cells with under 2 complete observations or zero variance are `None`.
pub fn aspect_correlation(pairs: &PairSet) -> Result<AspectCorrelationMatrix> {
    let aspects = pairs.aspects_present();
    if aspects.is_empty() {
        return Err(Error::Insufficient("no gold aspect values in pair set".into()));
    }
    let k = aspects.len();
    let mut n = vec![vec![0usize; k]; k];
    let mut mat_r = vec![vec![None; k]; k];
    let mut mat_rho = vec![vec![None; k]; k];
    for i in 0..k {
        for j in 0..k {
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for p in pairs.iter() {
                if let (Some(x), Some(y)) = (p.gold.get(&aspects[i]), p.gold.get(&aspects[j])) {
                    xs.push(x);
                    ys.push(y);
                }
            }
            n[i][j] = xs.len();
            if xs.len() >= 2 {
                mat_r[i][j] = pearson(&xs, &ys)?;
                mat_rho[i][j] = spearman(&xs, &ys)?;
            }
        }
    }
    Ok(AspectCorrelationMatrix {
        aspects,
        n,
        pearson: mat_r,
        spearman: mat_rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_hits_known_values() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let same = pearson(&xs, &xs).unwrap().unwrap();
        assert!((same - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|v| 5.0 - v).collect();
        let opposite = pearson(&xs, &neg).unwrap().unwrap();
        assert!((opposite + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&xs, &[2.0, 2.0, 2.0, 2.0]).unwrap(), None);
    }

    #[test]
    fn pearson_rejects_bad_shapes() {
        assert!(matches!(
            pearson(&[1.0], &[1.0, 2.0]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(Error::Insufficient(_))
        ));
        assert!(matches!(
            pearson(&[1.0, f64::NAN], &[1.0, 2.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn ranks_average_ties_exactly() {
        assert_eq!(average_ranks(&[10.0, 20.0, 30.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(average_ranks(&[10.0, 10.0, 30.0]), vec![1.5, 1.5, 3.0]);
        assert_eq!(
            average_ranks(&[5.0, 1.0, 5.0, 5.0]),
            vec![3.0, 1.0, 3.0, 3.0]
        );
    }

    #[test]
    fn spearman_on_small_permutation() {
        let rho = spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap().unwrap();
        assert!((rho - 0.5).abs() < 1e-12);
    }

    #[test]
    fn spearman_is_pearson_of_ranks() {
        let xs = [0.3, 2.0, 2.0, -1.0, 0.7];
        let ys = [1.0, 4.0, 2.5, 2.5, 3.0];
        let direct = spearman(&xs, &ys).unwrap();
        let via_ranks = pearson(&average_ranks(&xs), &average_ranks(&ys)).unwrap();
        assert_eq!(direct, via_ranks);
    }

    #[test]
    fn mse_known_values() {
        assert_eq!(mse(&[1.0, 3.0], &[2.0, 5.0]).unwrap(), 2.5);
        assert_eq!(mse(&[0.0], &[4.0]).unwrap(), 16.0);
    }

    #[test]
    fn classification_report_macro_math() {
        // all-1 predictions against half-and-half gold
        let rep = classification_report(&[1, 1, 1, 1], &[0, 0, 1, 1]).unwrap();
        assert_eq!(rep.accuracy, 0.5);
        assert_eq!(rep.per_class[0].f1, 0.0);
        assert!((rep.per_class[1].f1 - 2.0 / 3.0).abs() < 1e-15);
        assert!((rep.f1_macro - 1.0 / 3.0).abs() < 1e-15);
        assert!((rep.f1_weighted - 1.0 / 3.0).abs() < 1e-15);

        let rep = classification_report(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(rep.accuracy, 0.0);
        assert_eq!(rep.f1_macro, 0.0);
    }

    #[test]
    fn absent_gold_class_scores_zero_f1() {
        let rep = classification_report(&[1, 0, 1], &[1, 1, 1]).unwrap();
        assert_eq!(rep.per_class[0].support, 0);
        assert_eq!(rep.per_class[0].f1, 0.0);
        assert!((rep.f1_weighted - rep.per_class[1].f1).abs() < 1e-15);
    }
}
