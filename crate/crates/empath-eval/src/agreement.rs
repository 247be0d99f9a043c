//! Inter-annotator agreement: mean pairwise correlation or kappa,
//! Krippendorff's alpha, and consensus-versus-reference comparison.
//!
//! Discrete V/M/N labels enter numeric computations through the ordinal
//! stand-in N=1, M=2, V=3. Annotator pairs and items are always visited in
//! sorted order, so results are reproducible bit for bit.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::data::{
    AnnotationSet, AnnotationValue, Aspect, Rounding, Setting,
};
use crate::error::{Error, Result};
use crate::stats::{pearson, spearman};

/// Chance-agreement saturation guard for kappa.
const KAPPA_CHANCE_EPS: f64 = 1e-12;

/// Pairwise agreement metric for `mean_pairwise`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AgreementMetric {
    Pearson,
    Spearman,
    Kappa,
}

impl AgreementMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            AgreementMetric::Pearson => "pearson",
            AgreementMetric::Spearman => "spearman",
            AgreementMetric::Kappa => "kappa",
        }
    }
}

/// Distance family for Krippendorff's alpha.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaLevel {
    Nominal,
    Ordinal,
    Interval,
}

impl AlphaLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaLevel::Nominal => "nominal",
            AlphaLevel::Ordinal => "ordinal",
            AlphaLevel::Interval => "interval",
        }
    }
}

/// Mapping from raw rating values to kappa categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Discretizer {
    /// Continuous score to nearest integer, exact halves down.
    HalfDownInt,
    /// Continuous score to nearest 0.5 step, exact quarter ties down.
    HalfGrid,
    /// Values are already discrete classes; scores are rejected.
    VmnPassthrough,
}

impl Discretizer {
    fn category(self, value: AnnotationValue) -> Result<i64> {
        match (self, value) {
            (Discretizer::HalfDownInt, AnnotationValue::Score(s)) => {
                Ok(Rounding::HalfDown.apply(s) as i64)
            }
            (Discretizer::HalfGrid, AnnotationValue::Score(s)) => {
                // categories are doubled so every 0.5 step gets its own integer
                Ok(Rounding::HalfDown.apply(2.0 * s) as i64)
            }
            (Discretizer::VmnPassthrough, AnnotationValue::Class(c)) => Ok(c.as_numeric() as i64),
            (Discretizer::VmnPassthrough, AnnotationValue::Score(s)) => Err(Error::Domain(
                format!("vmn-passthrough cannot discretize continuous score {s}"),
            )),
            (_, AnnotationValue::Class(c)) => Err(Error::Domain(format!(
                "numeric discretizer cannot handle class label {c}"
            ))),
        }
    }

    /// Default for a setting: passthrough for discrete labels, else half-down.
    pub fn default_for(setting: Setting) -> Discretizer {
        match setting {
            Setting::Discrete => Discretizer::VmnPassthrough,
            _ => Discretizer::HalfDownInt,
        }
    }
}

/// Cohen's kappa between two aligned raters after discretization.
/// Returns `None` when chance agreement saturates (p_e = 1).
pub fn cohen_kappa(
    a: &[AnnotationValue],
    b: &[AnnotationValue],
    discretizer: Discretizer,
) -> Result<Option<f64>> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 {
        return Err(Error::Insufficient(format!(
            "kappa needs at least 2 items, got {}",
            a.len()
        )));
    }
    let n = a.len() as f64;
    let mut count_a: BTreeMap<i64, usize> = BTreeMap::new();
    let mut count_b: BTreeMap<i64, usize> = BTreeMap::new();
    let mut agree = 0usize;
    for (&va, &vb) in a.iter().zip(b.iter()) {
        let ca = discretizer.category(va)?;
        let cb = discretizer.category(vb)?;
        if ca == cb {
            agree += 1;
        }
        *count_a.entry(ca).or_default() += 1;
        *count_b.entry(cb).or_default() += 1;
    }
    let p_o = agree as f64 / n;
    let mut p_e = 0.0;
    for (cat, ca) in &count_a {
        if let Some(cb) = count_b.get(cat) {
            p_e += (*ca as f64 / n) * (*cb as f64 / n);
        }
    }
    if 1.0 - p_e <= KAPPA_CHANCE_EPS {
        return Ok(None);
    }
    Ok(Some((p_o - p_e) / (1.0 - p_e)))
}

/// Krippendorff's alpha over numeric rating units via the coincidence matrix.
/// Each unit holds the ratings one item received; units with fewer than two
/// ratings are ignored. Returns `None` when expected disagreement is zero
/// (every rating in the data is identical).
pub fn alpha_from_units(units: &[Vec<f64>], level: AlphaLevel) -> Result<Option<f64>> {
    let used: Vec<&Vec<f64>> = units.iter().filter(|u| u.len() >= 2).collect();
    if used.is_empty() {
        return Err(Error::Insufficient(
            "alpha needs at least one item with two ratings".into(),
        ));
    }
    for u in &used {
        if let Some(v) = u.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("rating {v} is not finite")));
        }
    }

    // observed value set, sorted
    let mut values: Vec<f64> = used.iter().flat_map(|u| u.iter().copied()).collect();
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    values.dedup();
    let index = |v: f64| values.binary_search_by(|p| p.partial_cmp(&v).expect("finite")).expect("observed value");
    let k = values.len();

    let mut coincidence = vec![vec![0.0f64; k]; k];
    for u in &used {
        let weight = 1.0 / (u.len() as f64 - 1.0);
        for (i, &vi) in u.iter().enumerate() {
            for (j, &vj) in u.iter().enumerate() {
                if i != j {
                    coincidence[index(vi)][index(vj)] += weight;
                }
            }
        }
    }
    let marginals: Vec<f64> = coincidence.iter().map(|row| row.iter().sum()).collect();
    let total: f64 = marginals.iter().sum();

    let distance_sq = |c: usize, d: usize| -> f64 {
        match level {
            AlphaLevel::Nominal => {
                if c == d {
                    0.0
                } else {
                    1.0
                }
            }
            AlphaLevel::Interval => {
                let diff = values[c] - values[d];
                diff * diff
            }
            AlphaLevel::Ordinal => {
                let (lo, hi) = if c <= d { (c, d) } else { (d, c) };
                let span: f64 = marginals[lo..=hi].iter().sum();
                let s = span - (marginals[c] + marginals[d]) / 2.0;
                s * s
            }
        }
    };

    let mut observed = 0.0;
    let mut expected = 0.0;
    for c in 0..k {
        for d in 0..k {
            if c != d {
                let dd = distance_sq(c, d);
                observed += coincidence[c][d] * dd;
                expected += marginals[c] * marginals[d] * dd;
            }
        }
    }
    if expected == 0.0 {
        return Ok(None);
    }
    Ok(Some(1.0 - (total - 1.0) * observed / expected))
}

/// Krippendorff's alpha for one (aspect, setting) slice of an annotation set.
pub fn krippendorff_alpha(
    annotations: &AnnotationSet,
    aspect: &Aspect,
    setting: Setting,
    level: AlphaLevel,
) -> Result<Option<f64>> {
    let table = annotations.table(aspect, setting);
    let units: Vec<Vec<f64>> = table
        .values()
        .map(|ratings| ratings.values().map(|v| v.as_numeric()).collect())
        .collect();
    alpha_from_units(&units, level)
}

/// One annotator pair's cell in a mean-pairwise computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseCell {
    pub a: String,
    pub b: String,
    /// Items both annotators rated.
    pub n_items: usize,
    /// `None` when skipped (under 2 co-rated items) or degenerate.
    pub value: Option<f64>,
}

/// Mean of a pairwise metric over all annotator pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanPairwise {
    pub metric: AgreementMetric,
    /// Unweighted mean over pairs with a defined value.
    pub mean: Option<f64>,
    pub cells: Vec<PairwiseCell>,
    /// Pairs contributing to the mean.
    pub pairs_used: usize,
    /// Pairs with fewer than 2 co-rated items.
    pub pairs_skipped: usize,
    /// Pairs computed but degenerate (zero variance or saturated chance).
    pub pairs_undefined: usize,
}

/// Computes one metric for every unordered annotator pair and averages the
/// defined values. Kappa uses the setting's default discretizer.
pub fn mean_pairwise(
    annotations: &AnnotationSet,
    aspect: &Aspect,
    setting: Setting,
    metric: AgreementMetric,
) -> Result<MeanPairwise> {
    let table = annotations.table(aspect, setting);
    let mut raters: BTreeSet<&String> = BTreeSet::new();
    for ratings in table.values() {
        raters.extend(ratings.keys());
    }
    let raters: Vec<&String> = raters.into_iter().collect();
    if raters.len() < 2 {
        return Err(Error::Insufficient(format!(
            "mean pairwise agreement needs at least 2 annotators, found {}",
            raters.len()
        )));
    }

    let mut cells = Vec::new();
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut skipped = 0usize;
    let mut undefined = 0usize;
    for ia in 0..raters.len() {
        for ib in ia + 1..raters.len() {
            let (a, b) = (raters[ia], raters[ib]);
            let mut va: Vec<AnnotationValue> = Vec::new();
            let mut vb: Vec<AnnotationValue> = Vec::new();
            for ratings in table.values() {
                if let (Some(x), Some(y)) = (ratings.get(a), ratings.get(b)) {
                    va.push(*x);
                    vb.push(*y);
                }
            }
            if va.len() < 2 {
                skipped += 1;
                cells.push(PairwiseCell {
                    a: a.clone(),
                    b: b.clone(),
                    n_items: va.len(),
                    value: None,
                });
                continue;
            }
            let value = match metric {
                AgreementMetric::Pearson => {
                    let xs: Vec<f64> = va.iter().map(|v| v.as_numeric()).collect();
                    let ys: Vec<f64> = vb.iter().map(|v| v.as_numeric()).collect();
                    pearson(&xs, &ys)?
                }
                AgreementMetric::Spearman => {
                    let xs: Vec<f64> = va.iter().map(|v| v.as_numeric()).collect();
                    let ys: Vec<f64> = vb.iter().map(|v| v.as_numeric()).collect();
                    spearman(&xs, &ys)?
                }
                AgreementMetric::Kappa => {
                    cohen_kappa(&va, &vb, Discretizer::default_for(setting))?
                }
            };
            match value {
                Some(v) => {
                    sum += v;
                    used += 1;
                }
                None => undefined += 1,
            }
            cells.push(PairwiseCell {
                a: a.clone(),
                b: b.clone(),
                n_items: va.len(),
                value,
            });
        }
    }
    Ok(MeanPairwise {
        metric,
        mean: if used > 0 { Some(sum / used as f64) } else { None },
        cells,
        pairs_used: used,
        pairs_skipped: skipped,
        pairs_undefined: undefined,
    })
}

/// Agreement summary for one (group, aspect, setting) combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub group: String,
    pub aspect: Aspect,
    pub setting: Setting,
    pub n_annotators: usize,
    /// Distinct items rated in this slice.
    pub n_items: usize,
    /// Annotator pairs with at least 2 co-rated items.
    pub n_pairs: usize,
    pub mean_pearson: Option<f64>,
    pub mean_spearman: Option<f64>,
    pub mean_kappa: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_level: AlphaLevel,
}

fn soften_insufficient<T>(res: Result<T>) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::Insufficient(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Agreement table over group x aspect x setting. Groups come from a roster
/// mapping; aspects and settings keep the order given. Combinations with no
/// annotations are omitted; sparse cells go undefined rather than failing.
pub fn group_report(
    annotations: &AnnotationSet,
    groups: &BTreeMap<String, Vec<String>>,
    aspects: &[Aspect],
    settings: &[Setting],
) -> Result<Vec<AgreementReport>> {
    let roster = annotations.roster();
    for (name, members) in groups {
        for m in members {
            if !roster.contains(m) {
                return Err(Error::Lookup(format!(
                    "group {name:?} references unknown annotator {m:?}"
                )));
            }
        }
    }

    let mut rows = Vec::new();
    for (name, members) in groups {
        let members: BTreeSet<&String> = members.iter().collect();
        let sub = AnnotationSet::new(
            annotations
                .iter()
                .filter(|r| members.contains(&r.annotator_id))
                .cloned()
                .collect(),
        )?;
        for aspect in aspects {
            for &setting in settings {
                let table = sub.table(aspect, setting);
                if table.is_empty() {
                    continue;
                }
                let n_items = table.len();
                let mut raters: BTreeSet<&String> = BTreeSet::new();
                for ratings in table.values() {
                    raters.extend(ratings.keys());
                }
                let level = match setting {
                    Setting::Discrete => AlphaLevel::Nominal,
                    _ => AlphaLevel::Interval,
                };
                let mp = |metric| -> Result<Option<MeanPairwise>> {
                    soften_insufficient(mean_pairwise(&sub, aspect, setting, metric))
                };
                let p = mp(AgreementMetric::Pearson)?;
                let s = mp(AgreementMetric::Spearman)?;
                let k = mp(AgreementMetric::Kappa)?;
                let alpha =
                    soften_insufficient(krippendorff_alpha(&sub, aspect, setting, level))?
                        .flatten();
                rows.push(AgreementReport {
                    group: name.clone(),
                    aspect: aspect.clone(),
                    setting,
                    n_annotators: raters.len(),
                    n_items,
                    n_pairs: p.as_ref().map_or(0, |m| m.pairs_used + m.pairs_undefined),
                    mean_pearson: p.and_then(|m| m.mean),
                    mean_spearman: s.and_then(|m| m.mean),
                    mean_kappa: k.and_then(|m| m.mean),
                    alpha,
                    alpha_level: level,
                });
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Insufficient(
            "no annotations for any requested (group, aspect, setting)".into(),
        ));
    }
    Ok(rows)
}

/// Agreement between the per-item annotator consensus (mean rating) and an
/// external per-pair reference score, treated as two raters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusReport {
    pub aspect: Aspect,
    pub setting: Setting,
    /// Items with both a consensus and a reference score.
    pub n_items: usize,
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub kappa: Option<f64>,
    pub alpha: Option<f64>,
}

/// Compares consensus annotations against reference scores on the overlap.
pub fn consensus_vs_reference(
    annotations: &AnnotationSet,
    aspect: &Aspect,
    setting: Setting,
    reference: &BTreeMap<String, f64>,
    discretizer: Discretizer,
) -> Result<ConsensusReport> {
    let table = annotations.table(aspect, setting);
    let mut consensus = Vec::new();
    let mut refs = Vec::new();
    for ((_, pair_id), ratings) in &table {
        if let Some(&r) = reference.get(pair_id) {
            let mut sum = 0.0;
            for v in ratings.values() {
                sum += v.as_numeric();
            }
            consensus.push(sum / ratings.len() as f64);
            refs.push(r);
        }
    }
    if consensus.is_empty() {
        return Err(Error::Insufficient(
            "no overlap between annotated items and reference scores".into(),
        ));
    }
    let soften = |res: Result<Option<f64>>| match res {
        Ok(v) => Ok(v),
        Err(Error::Insufficient(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let r = soften(pearson(&consensus, &refs))?;
    let rho = soften(spearman(&consensus, &refs))?;
    let kappa = if consensus.len() >= 2 {
        let a: Vec<AnnotationValue> = consensus.iter().map(|&v| AnnotationValue::Score(v)).collect();
        let b: Vec<AnnotationValue> = refs.iter().map(|&v| AnnotationValue::Score(v)).collect();
        cohen_kappa(&a, &b, discretizer)?
    } else {
        None
    };
    let units: Vec<Vec<f64>> = consensus
        .iter()
        .zip(refs.iter())
        .map(|(&c, &r)| vec![c, r])
        .collect();
    let alpha = soften(alpha_from_units(&units, AlphaLevel::Interval))?;
    Ok(ConsensusReport {
        aspect: aspect.clone(),
        setting,
        n_items: consensus.len(),
        r,
        rho,
        kappa,
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{AnnotationRecord, DiscreteClass};

    fn score(v: f64) -> AnnotationValue {
        AnnotationValue::Score(v)
    }

    fn class(c: DiscreteClass) -> AnnotationValue {
        AnnotationValue::Class(c)
    }

    fn ann(
        annotator: &str,
        pair: &str,
        aspect: &str,
        setting: Setting,
        value: AnnotationValue,
    ) -> AnnotationRecord {
        AnnotationRecord {
            annotator_id: annotator.into(),
            pair_id: pair.into(),
            aspect: Aspect::new(aspect),
            setting,
            value,
        }
    }

    #[test]
    fn kappa_on_vmn_hand_table() {
        use DiscreteClass::*;
        let a: Vec<_> = [V, M, N, V].into_iter().map(class).collect();
        let b: Vec<_> = [V, M, N, M].into_iter().map(class).collect();
        let k = cohen_kappa(&a, &b, Discretizer::VmnPassthrough)
            .unwrap()
            .unwrap();
        // p_o = 3/4, p_e = 5/16, kappa = 7/11
        assert!((k - 7.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn kappa_perfect_disagreement_is_minus_one() {
        let a: Vec<_> = [1.0, 1.0, 0.0, 0.0].into_iter().map(score).collect();
        let b: Vec<_> = [0.0, 0.0, 1.0, 1.0].into_iter().map(score).collect();
        let k = cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap().unwrap();
        assert_eq!(k, -1.0);
    }

    #[test]
    fn kappa_is_symmetric() {
        let a: Vec<_> = [1.0, 2.0, 3.5, 2.5, 4.0].into_iter().map(score).collect();
        let b: Vec<_> = [1.5, 2.0, 3.0, 1.0, 3.5].into_iter().map(score).collect();
        let ab = cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap();
        let ba = cohen_kappa(&b, &a, Discretizer::HalfDownInt).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn kappa_saturated_chance_is_undefined() {
        let a: Vec<_> = [2.0, 2.0, 2.0].into_iter().map(score).collect();
        assert_eq!(
            cohen_kappa(&a, &a, Discretizer::HalfDownInt).unwrap(),
            None
        );
    }

    #[test]
    fn half_grid_separates_half_steps() {
        let a: Vec<_> = [1.0, 1.5, 2.0].into_iter().map(score).collect();
        let b: Vec<_> = [1.0, 2.0, 2.0].into_iter().map(score).collect();
        // half-down integer collapses 1.5 into class 1; half-grid keeps it
        // apart, which here lowers chance agreement: p_o = 2/3 both ways,
        // p_e = 4/9 on integers but 1/3 on the grid
        let int = cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap().unwrap();
        let grid = cohen_kappa(&a, &b, Discretizer::HalfGrid).unwrap().unwrap();
        assert!((int - 0.4).abs() < 1e-15);
        assert!((grid - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_interval_hand_coincidence() {
        // two items, ratings {1,2} and {2,1}
        let units = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        let a = alpha_from_units(&units, AlphaLevel::Interval).unwrap().unwrap();
        assert!((a - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn alpha_unanimous_varied_items_is_one() {
        let units = vec![vec![2.0, 2.0], vec![4.0, 4.0], vec![1.0, 1.0, 1.0]];
        for level in [AlphaLevel::Nominal, AlphaLevel::Ordinal, AlphaLevel::Interval] {
            let a = alpha_from_units(&units, level).unwrap().unwrap();
            assert_eq!(a, 1.0);
        }
    }

    #[test]
    fn alpha_all_identical_values_is_undefined() {
        let units = vec![vec![3.0, 3.0], vec![3.0, 3.0]];
        assert_eq!(
            alpha_from_units(&units, AlphaLevel::Interval).unwrap(),
            None
        );
    }

    #[test]
    fn alpha_ignores_single_rating_items() {
        let base = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        let mut padded = base.clone();
        padded.push(vec![4.0]);
        let a = alpha_from_units(&base, AlphaLevel::Interval).unwrap();
        let b = alpha_from_units(&padded, AlphaLevel::Interval).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn alpha_interval_is_affine_invariant() {
        let units = vec![
            vec![1.0, 2.0, 2.5],
            vec![3.0, 3.5],
            vec![4.0, 3.0],
            vec![1.5, 1.0],
        ];
        let shifted: Vec<Vec<f64>> = units
            .iter()
            .map(|u| u.iter().map(|v| 10.0 * v - 3.0).collect())
            .collect();
        let a = alpha_from_units(&units, AlphaLevel::Interval).unwrap().unwrap();
        let b = alpha_from_units(&shifted, AlphaLevel::Interval).unwrap().unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn alpha_binary_nominal_matches_interval() {
        let units = vec![
            vec![0.0, 1.0],
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let nom = alpha_from_units(&units, AlphaLevel::Nominal).unwrap().unwrap();
        let int = alpha_from_units(&units, AlphaLevel::Interval).unwrap().unwrap();
        assert!((nom - int).abs() < 1e-12);
    }

    #[test]
    fn mean_pairwise_two_annotators_equals_direct_value() {
        let rec = vec![
            ann("u1", "p1", "empathy", Setting::Summary, score(1.0)),
            ann("u1", "p2", "empathy", Setting::Summary, score(2.0)),
            ann("u1", "p3", "empathy", Setting::Summary, score(3.5)),
            ann("u2", "p1", "empathy", Setting::Summary, score(2.0)),
            ann("u2", "p2", "empathy", Setting::Summary, score(2.5)),
            ann("u2", "p3", "empathy", Setting::Summary, score(4.0)),
        ];
        let set = AnnotationSet::new(rec).unwrap();
        let mp = mean_pairwise(&set, &Aspect::empathy(), Setting::Summary, AgreementMetric::Pearson)
            .unwrap();
        let direct = pearson(&[1.0, 2.0, 3.5], &[2.0, 2.5, 4.0]).unwrap();
        assert_eq!(mp.mean, direct);
        assert_eq!(mp.pairs_used, 1);
    }

    #[test]
    fn mean_pairwise_skips_thin_overlap() {
        let rec = vec![
            ann("u1", "p1", "empathy", Setting::Summary, score(1.0)),
            ann("u1", "p2", "empathy", Setting::Summary, score(2.0)),
            ann("u2", "p1", "empathy", Setting::Summary, score(2.0)),
            ann("u2", "p2", "empathy", Setting::Summary, score(2.5)),
            // u3 shares only one item with the others
            ann("u3", "p1", "empathy", Setting::Summary, score(3.0)),
        ];
        let set = AnnotationSet::new(rec).unwrap();
        let mp = mean_pairwise(&set, &Aspect::empathy(), Setting::Summary, AgreementMetric::Pearson)
            .unwrap();
        assert_eq!(mp.cells.len(), 3);
        assert_eq!(mp.pairs_skipped, 2);
        assert_eq!(mp.pairs_used, 1);
    }

    #[test]
    fn combined_setting_concatenates_summary_and_full() {
        let rec = vec![
            ann("u1", "p1", "event", Setting::Summary, score(1.0)),
            ann("u2", "p1", "event", Setting::Summary, score(1.0)),
            ann("u1", "p1", "event", Setting::Full, score(4.0)),
            ann("u2", "p1", "event", Setting::Full, score(4.0)),
        ];
        let set = AnnotationSet::new(rec).unwrap();
        let table = set.table(&Aspect::event(), Setting::Combined);
        assert_eq!(table.len(), 2);
        // same pair id appears once per source setting
        let mp = mean_pairwise(&set, &Aspect::event(), Setting::Combined, AgreementMetric::Pearson)
            .unwrap();
        assert_eq!(mp.cells[0].n_items, 2);
    }

    #[test]
    fn consensus_vs_reference_on_identical_data() {
        let mut rec = Vec::new();
        for (pid, (a, b)) in [("p1", (1.0, 2.0)), ("p2", (3.0, 3.0)), ("p3", (4.0, 3.5))] {
            rec.push(ann("u1", pid, "empathy", Setting::Summary, score(a)));
            rec.push(ann("u2", pid, "empathy", Setting::Summary, score(b)));
        }
        let set = AnnotationSet::new(rec).unwrap();
        let mut reference = BTreeMap::new();
        reference.insert("p1".to_string(), 1.5);
        reference.insert("p2".to_string(), 3.0);
        reference.insert("p3".to_string(), 3.75);
        let rep = consensus_vs_reference(
            &set,
            &Aspect::empathy(),
            Setting::Summary,
            &reference,
            Discretizer::HalfDownInt,
        )
        .unwrap();
        assert_eq!(rep.n_items, 3);
        // consensus means equal the reference exactly, so r = rho = alpha = 1
        assert!((rep.r.unwrap() - 1.0).abs() < 1e-12);
        assert!((rep.alpha.unwrap() - 1.0).abs() < 1e-15);
    }
}
