//! Acceptance suite: ten end-to-end properties the toolkit must hold.
//! Every metric checked here is recomputed from its plain definition,
//! not by calling back into the code under test.

mod common;

use std::fmt::Write as _;
use std::io::Cursor;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use empath_eval::agreement::{
    alpha_from_units, cohen_kappa, mean_pairwise, AgreementMetric, AlphaLevel, Discretizer,
};
use empath_eval::data::{
    bin_label, parse_pairs, parse_predictions, round_half_down, AnnotationRecord, AnnotationSet,
    AnnotationValue, Aspect, FileFormat, PredictionRecord, PredictionSet, Rounding, Setting,
    Variant,
};
use empath_eval::diagnostics::{
    confusion_matrix, empirical_distribution, probability_profile, severe_error_table,
    ConfusionMode,
};
use empath_eval::losses::{finite_diff_grad, LossConfig, LossKind, PairBatch};
use empath_eval::scoring::{swap_aggregate, SwapMode};
use empath_eval::stats::{average_ranks, classification_report, mse, pearson, spearman, EvalConfig};
use empath_eval::trainer::{synthetic_recovery_task, train_projection, TrainConfig};

use common::*;

fn parse_pair_fixture(jsonl: &str) -> empath_eval::data::PairSet {
    let parsed = parse_pairs(Cursor::new(jsonl.as_bytes()), FileFormat::Jsonl).unwrap();
    assert!(parsed.row_errors.is_empty(), "{:?}", parsed.row_errors);
    parsed.value
}

fn parse_pred_fixture(jsonl: &str) -> PredictionSet {
    let parsed = parse_predictions(Cursor::new(jsonl.as_bytes()), FileFormat::Jsonl).unwrap();
    assert!(parsed.row_errors.is_empty(), "{:?}", parsed.row_errors);
    parsed.value
}

#[test]
fn criterion_01_train_split_class_priors() {
    let t0 = Instant::now();
    let pairs = parse_pair_fixture(&canonical_pairs_jsonl());
    let shares = empirical_distribution(
        &pairs,
        &Aspect::empathy(),
        Some("train"),
        Rounding::HalfDown,
    )
    .unwrap();
    for k in 0..4 {
        assert!(
            (shares[k] - TRAIN_CLASS_SHARES[k]).abs() <= 5e-4,
            "class {} share {} vs {}",
            k + 1,
            shares[k],
            TRAIN_CLASS_SHARES[k]
        );
    }
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    println!("[acceptance] criterion 1 train-split class priors: PASS");
}

#[test]
fn criterion_02_constant_predictor_diagnostics() {
    let t0 = Instant::now();
    let pairs = parse_pair_fixture(&canonical_pairs_jsonl());
    let preds = parse_pred_fixture(&constant_probs_preds_jsonl());
    let aspect = Aspect::empathy();
    let constant = [0.140, 0.399, 0.404, 0.057];
    // class sizes of the canonical golds under half-down rounding
    let sizes = [210usize, 598, 606, 86];

    let profile = probability_profile(&preds, &pairs, &aspect, Rounding::HalfDown).unwrap();
    assert_eq!(profile.n_used, 1500);
    assert_eq!(profile.groups.len(), 4);
    for (g, group) in profile.groups.iter().enumerate() {
        assert_eq!(group.gold_class, (g + 1) as u8);
        assert_eq!(group.n, sizes[g]);
        let tv: f64 = group
            .profile
            .iter()
            .zip(constant.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv <= 1e-12, "group {} drifted from its inputs: {tv}", g + 1);
    }

    let conf = confusion_matrix(
        &preds,
        &pairs,
        &aspect,
        Rounding::HalfDown,
        ConfusionMode::ArgmaxProbs,
    )
    .unwrap();
    assert_eq!(conf.n, 1500);
    for g in 0..4 {
        for p in 0..4 {
            let expect = if p == 2 { sizes[g] } else { 0 };
            assert_eq!(conf.counts[g][p], expect, "cell ({g},{p})");
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 1.0);
    println!("[acceptance] criterion 2 constant predictor diagnostics: PASS");
}

#[test]
fn criterion_03_severe_error_census() {
    // offsets cycle so every bucket sees hits, misses, and exact-delta gaps
    let offsets = [0.0, 1.0, -1.0, 1.25, -1.5];
    let mut pairs_jsonl = String::new();
    let mut preds_jsonl = String::new();
    let mut raw: Vec<(f64, f64)> = Vec::new();
    for i in 0..100 {
        let gold = 1.0 + (i % 7) as f64 * 0.5;
        let score = gold + offsets[i % 5];
        let _ = writeln!(
            pairs_jsonl,
            r#"{{"pair_id":"e{i:02}","story_a_id":"x{i:02}","story_b_id":"y{i:02}","gold":{{"empathy":{gold}}},"split":"test"}}"#,
        );
        let _ = writeln!(
            preds_jsonl,
            r#"{{"pair_id":"e{i:02}","aspect":"empathy","score":{score}}}"#,
        );
        raw.push((gold, score));
    }
    let pairs = parse_pair_fixture(&pairs_jsonl);
    let preds = parse_pred_fixture(&preds_jsonl);
    let table =
        severe_error_table(&preds, &pairs, &Aspect::empathy(), &EvalConfig::default()).unwrap();

    // independent recount straight from the construction arrays
    let buckets = [1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0];
    let mut totals = [0usize; 7];
    let mut errors = [0usize; 7];
    for &(gold, score) in &raw {
        let idx = buckets.iter().position(|b| *b == gold).unwrap();
        totals[idx] += 1;
        if (score - gold).abs() > 1.0 {
            errors[idx] += 1;
        }
    }
    assert_eq!(table.n, 100);
    assert_eq!(table.rows.len(), 7);
    for (i, row) in table.rows.iter().enumerate() {
        assert_eq!(row.bucket, buckets[i]);
        assert_eq!(row.total, totals[i], "bucket {} total", buckets[i]);
        assert_eq!(row.errors, errors[i], "bucket {} errors", buckets[i]);
    }
    // gaps of exactly 1.0 occur in 40 rows and none of them count
    let exactly_at = raw
        .iter()
        .filter(|(g, s)| ((s - g).abs() - 1.0).abs() < 1e-12)
        .count();
    assert_eq!(exactly_at, 40);
    let table_errors: usize = table.rows.iter().map(|r| r.errors).sum();
    assert_eq!(table_errors, 40);
    assert_eq!(errors.iter().sum::<usize>(), 40);
    println!("[acceptance] criterion 3 severe error census: PASS");
}

// Reference implementations written from the plain definitions.

fn oracle_pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for i in 0..xs.len() {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx.sqrt() * syy.sqrt()))
}

fn oracle_ranks(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|&x| {
            let less = xs.iter().filter(|&&o| o < x).count();
            let ties = xs.iter().filter(|&&o| o == x).count();
            less as f64 + (ties as f64 + 1.0) / 2.0
        })
        .collect()
}

fn oracle_spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    oracle_pearson(&oracle_ranks(xs), &oracle_ranks(ys))
}

fn oracle_mse(ps: &[f64], gs: &[f64]) -> f64 {
    ps.iter()
        .zip(gs.iter())
        .map(|(p, g)| (p - g) * (p - g))
        .sum::<f64>()
        / ps.len() as f64
}

struct OracleClassification {
    accuracy: f64,
    precision_macro: f64,
    recall_macro: f64,
    f1_macro: f64,
    f1_weighted: f64,
}

fn oracle_classification(pred: &[u8], gold: &[u8]) -> OracleClassification {
    let mut m = [[0usize; 2]; 2];
    for i in 0..pred.len() {
        m[gold[i] as usize][pred[i] as usize] += 1;
    }
    let n = pred.len() as f64;
    let mut prec = [0.0; 2];
    let mut rec = [0.0; 2];
    let mut f1 = [0.0; 2];
    let mut support = [0.0; 2];
    for c in 0..2 {
        let tp = m[c][c] as f64;
        let col = (m[0][c] + m[1][c]) as f64;
        let row = (m[c][0] + m[c][1]) as f64;
        support[c] = row;
        prec[c] = if col > 0.0 { tp / col } else { 0.0 };
        rec[c] = if row > 0.0 { tp / row } else { 0.0 };
        f1[c] = if prec[c] + rec[c] > 0.0 {
            2.0 * prec[c] * rec[c] / (prec[c] + rec[c])
        } else {
            0.0
        };
    }
    OracleClassification {
        accuracy: (m[0][0] + m[1][1]) as f64 / n,
        precision_macro: (prec[0] + prec[1]) / 2.0,
        recall_macro: (rec[0] + rec[1]) / 2.0,
        f1_macro: (f1[0] + f1[1]) / 2.0,
        f1_weighted: (support[0] * f1[0] + support[1] * f1[1]) / n,
    }
}

fn oracle_kappa(a: &[i64], b: &[i64]) -> Option<f64> {
    use std::collections::BTreeMap;
    let n = a.len() as f64;
    let mut table: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b.iter()) {
        *table.entry((x, y)).or_default() += 1;
    }
    let mut cats: Vec<i64> = a.iter().chain(b.iter()).copied().collect();
    cats.sort_unstable();
    cats.dedup();
    let p_o: f64 = cats
        .iter()
        .map(|&c| *table.get(&(c, c)).unwrap_or(&0) as f64)
        .sum::<f64>()
        / n;
    let mut p_e = 0.0;
    for &c in &cats {
        let row: usize = table
            .iter()
            .filter(|((x, _), _)| *x == c)
            .map(|(_, k)| k)
            .sum();
        let col: usize = table
            .iter()
            .filter(|((_, y), _)| *y == c)
            .map(|(_, k)| k)
            .sum();
        p_e += (row as f64 / n) * (col as f64 / n);
    }
    if 1.0 - p_e <= 1e-12 {
        return None;
    }
    Some((p_o - p_e) / (1.0 - p_e))
}

/// Reliability from the raw double sums: observed disagreement averages
/// within-unit pair distances, expected pools every rating.
fn oracle_alpha(units: &[Vec<f64>], level: AlphaLevel) -> Option<f64> {
    let delta = |a: f64, b: f64| -> f64 {
        match level {
            AlphaLevel::Nominal => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
            AlphaLevel::Interval => (a - b) * (a - b),
            AlphaLevel::Ordinal => unreachable!("not exercised here"),
        }
    };
    let used: Vec<&Vec<f64>> = units.iter().filter(|u| u.len() >= 2).collect();
    let n: usize = used.iter().map(|u| u.len()).sum();
    let mut d_o = 0.0;
    for u in &used {
        let mut s = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i != j {
                    s += delta(u[i], u[j]);
                }
            }
        }
        d_o += s / (u.len() as f64 - 1.0);
    }
    d_o /= n as f64;
    let pooled: Vec<f64> = used.iter().flat_map(|u| u.iter().copied()).collect();
    let mut d_e = 0.0;
    for i in 0..pooled.len() {
        for j in 0..pooled.len() {
            if i != j {
                d_e += delta(pooled[i], pooled[j]);
            }
        }
    }
    d_e /= (n * (n - 1)) as f64;
    if d_e == 0.0 {
        return None;
    }
    Some(1.0 - d_o / d_e)
}

fn close_opt(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        _ => false,
    }
}

fn check_correlations(xs: &[f64], ys: &[f64], label: &str) {
    let tol = 1e-10;
    let r = pearson(xs, ys).unwrap();
    assert!(close_opt(r, oracle_pearson(xs, ys), tol), "pearson {label}");
    let rho = spearman(xs, ys).unwrap();
    assert!(
        close_opt(rho, oracle_spearman(xs, ys), tol),
        "spearman {label}"
    );
    assert!(
        (mse(xs, ys).unwrap() - oracle_mse(xs, ys)).abs() <= tol,
        "mse {label}"
    );
    // ranks agree exactly and the rank route reproduces spearman bitwise
    let lr = average_ranks(xs);
    let or = oracle_ranks(xs);
    assert_eq!(lr, or, "ranks {label}");
    let via_ranks = pearson(&average_ranks(xs), &average_ranks(ys)).unwrap();
    match (rho, via_ranks) {
        (Some(a), Some(b)) => assert_eq!(a.to_bits(), b.to_bits(), "rank route {label}"),
        (a, b) => assert_eq!(a.is_none(), b.is_none(), "rank route {label}"),
    }
}

#[test]
fn criterion_04_metric_oracle_agreement() {
    let tol = 1e-10;

    // exhaustive binary vectors up to length 8
    for n in 2..=8usize {
        for xm in 0..(1u32 << n) {
            let xs: Vec<f64> = (0..n).map(|k| ((xm >> k) & 1) as f64).collect();
            for ym in 0..(1u32 << n) {
                let ys: Vec<f64> = (0..n).map(|k| ((ym >> k) & 1) as f64).collect();
                check_correlations(&xs, &ys, &format!("n={n} x={xm:b} y={ym:b}"));

                let a: Vec<AnnotationValue> =
                    xs.iter().map(|&v| AnnotationValue::Score(v + 1.0)).collect();
                let b: Vec<AnnotationValue> =
                    ys.iter().map(|&v| AnnotationValue::Score(v + 1.0)).collect();
                let k = cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap();
                let ka: Vec<i64> = xs.iter().map(|&v| v as i64 + 1).collect();
                let kb: Vec<i64> = ys.iter().map(|&v| v as i64 + 1).collect();
                assert!(
                    close_opt(k, oracle_kappa(&ka, &kb), tol),
                    "kappa n={n} x={xm:b} y={ym:b}"
                );

                if n <= 6 {
                    let units: Vec<Vec<f64>> = xs
                        .iter()
                        .zip(ys.iter())
                        .map(|(&x, &y)| vec![x + 1.0, y + 1.0])
                        .collect();
                    for level in [AlphaLevel::Nominal, AlphaLevel::Interval] {
                        let got = alpha_from_units(&units, level).unwrap();
                        assert!(
                            close_opt(got, oracle_alpha(&units, level), tol),
                            "alpha {level:?} n={n} x={xm:b} y={ym:b}"
                        );
                    }
                }
            }
        }
    }

    // seeded random cases over ties, grids, and continuous values
    let mut rng = ChaCha8Rng::seed_from_u64(0x04ac);
    for case in 0..1000 {
        let n = rng.gen_range(2..40);
        let snap = case % 3 == 0;
        let draw = |rng: &mut ChaCha8Rng| -> f64 {
            if snap {
                1.0 + rng.gen_range(0..7) as f64 * 0.5
            } else {
                rng.gen_range(1.0..4.0)
            }
        };
        let xs: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let ys: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        check_correlations(&xs, &ys, &format!("case {case}"));

        let m = rng.gen_range(1..30);
        let pred: Vec<u8> = (0..m).map(|_| rng.gen_range(0..2) as u8).collect();
        let gold: Vec<u8> = (0..m).map(|_| rng.gen_range(0..2) as u8).collect();
        let got = classification_report(&pred, &gold).unwrap();
        let want = oracle_classification(&pred, &gold);
        assert!((got.accuracy - want.accuracy).abs() <= tol, "case {case}");
        assert!(
            (got.precision_macro - want.precision_macro).abs() <= tol,
            "case {case}"
        );
        assert!(
            (got.recall_macro - want.recall_macro).abs() <= tol,
            "case {case}"
        );
        assert!((got.f1_macro - want.f1_macro).abs() <= tol, "case {case}");
        assert!(
            (got.f1_weighted - want.f1_weighted).abs() <= tol,
            "case {case}"
        );

        let kn = rng.gen_range(2..30);
        let ka: Vec<i64> = (0..kn).map(|_| rng.gen_range(1..5)).collect();
        let kb: Vec<i64> = (0..kn).map(|_| rng.gen_range(1..5)).collect();
        let a: Vec<AnnotationValue> = ka
            .iter()
            .map(|&v| AnnotationValue::Score(v as f64))
            .collect();
        let b: Vec<AnnotationValue> = kb
            .iter()
            .map(|&v| AnnotationValue::Score(v as f64))
            .collect();
        let k = cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap();
        assert!(close_opt(k, oracle_kappa(&ka, &kb), tol), "kappa case {case}");

        let n_units = rng.gen_range(2..10);
        let units: Vec<Vec<f64>> = (0..n_units)
            .map(|u| {
                let m = if u < 2 { 2 } else { rng.gen_range(1..5) };
                (0..m)
                    .map(|_| 1.0 + rng.gen_range(0..7) as f64 * 0.5)
                    .collect()
            })
            .collect();
        for level in [AlphaLevel::Nominal, AlphaLevel::Interval] {
            let got = alpha_from_units(&units, level).unwrap();
            assert!(
                close_opt(got, oracle_alpha(&units, level), tol),
                "alpha {level:?} case {case}"
            );
        }
    }
    println!("[acceptance] criterion 4 metric oracle agreement: PASS");
}

#[test]
fn criterion_05_analytic_gradients_match_finite_differences() {
    let t0 = Instant::now();
    let config = LossConfig::default();
    let h = 1e-5;
    for (li, kind) in LossKind::ALL.iter().enumerate() {
        for case in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(0x9000 + li as u64 * 1000 + case);
            let n = 3 + (case as usize % 5);
            // the complex-split loss needs an even number of coordinates
            let dim = if *kind == LossKind::Angle {
                2 + 2 * (case as usize % 3)
            } else {
                2 + (case as usize % 4)
            };
            let side = |rng: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
                (0..n)
                    .map(|_| loop {
                        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
                        if v.iter().map(|x| x * x).sum::<f64>().sqrt() > 1e-2 {
                            break v;
                        }
                    })
                    .collect()
            };
            let u = side(&mut rng);
            let v = side(&mut rng);
            let labels: Vec<f64> = (0..n)
                .map(|_| 1.0 + rng.gen_range(0..7) as f64 * 0.5)
                .collect();
            let batch = PairBatch::new(u, v, labels).unwrap();
            let analytic = kind.evaluate(&batch, &config).unwrap();
            let (num_u, num_v) = finite_diff_grad(*kind, &batch, &config, h).unwrap();
            let mut diff2 = 0.0;
            let mut norm2 = 0.0;
            let mut ana_norm2 = 0.0;
            for (ga, gn) in analytic
                .grad_u
                .iter()
                .chain(analytic.grad_v.iter())
                .zip(num_u.iter().chain(num_v.iter()))
            {
                for (a, b) in ga.iter().zip(gn.iter()) {
                    diff2 += (a - b) * (a - b);
                    norm2 += b * b;
                    ana_norm2 += a * a;
                }
            }
            let (diff, scale) = (diff2.sqrt(), norm2.sqrt().max(ana_norm2.sqrt()));
            // absolute floor: a saturated ranking batch has a near-zero
            // loss whose central difference sits below one ulp of the
            // log-sum-exp intermediates, so both sides must count as zero
            assert!(
                diff <= 1e-8 + 1e-5 * scale,
                "{kind} case {case}: grad gap {diff:e} at scale {scale:e}"
            );
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 30.0);
    println!("[acceptance] criterion 5 analytic gradients match finite differences: PASS");
}

#[test]
fn criterion_06_projection_head_recovers_planted_signal() {
    let t0 = Instant::now();
    let (train, dev) = synthetic_recovery_task(500, 100, 20260816);
    let configs = [
        (LossKind::CosineMse, 0.3, 8usize, 20.0),
        (LossKind::Contrastive, 0.3, 8, 20.0),
        (LossKind::Cosent, 0.03, 8, 2.0),
        (LossKind::Angle, 0.1, 4, 20.0),
    ];
    for (loss, lr, out_dim, lambda) in configs {
        let config = TrainConfig {
            loss,
            loss_config: LossConfig {
                margin: 0.5,
                lambda,
            },
            lr,
            epochs: 20,
            batch_size: 32,
            seed: 7,
            out_dim,
            early_stop: None,
        };
        let (_, history) = train_projection(&train, &dev, &config).unwrap();
        let (_, rerun) = train_projection(&train, &dev, &config).unwrap();
        assert_eq!(history, rerun, "{loss}: reruns diverged");
        assert_eq!(
            serde_json::to_string(&history).unwrap(),
            serde_json::to_string(&rerun).unwrap(),
            "{loss}: serialized reruns diverged"
        );
        let epoch0 = history.epoch0_dev_spearman.unwrap();
        let best = history
            .dev_spearman
            .iter()
            .flatten()
            .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        assert!(best > epoch0, "{loss}: best {best} <= start {epoch0}");
        if loss == LossKind::CosineMse {
            assert!(epoch0 < 0.2, "start too strong: {epoch0}");
            assert!(best > 0.9, "signal not recovered: {best}");
        }
    }
    assert!(t0.elapsed().as_secs_f64() < 60.0);
    println!("[acceptance] criterion 6 projection head recovers planted signal: PASS");
}

#[test]
fn criterion_07_threshold_and_rounding_conventions() {
    // the binary threshold is exclusive
    assert_eq!(bin_label(2.5, 2.5), 0);
    assert_eq!(bin_label(2.5f64.next_up(), 2.5), 1);
    assert_eq!(bin_label(2.6, 2.5), 1);
    assert_eq!(bin_label(1.0, 2.5), 0);
    assert_eq!(bin_label(4.0, 2.5), 1);

    // exact halves round down
    assert_eq!(round_half_down(1.5).unwrap(), 1);
    assert_eq!(round_half_down(2.5).unwrap(), 2);
    assert_eq!(round_half_down(3.5).unwrap(), 3);
    assert_eq!(round_half_down(2.5f64.next_up()).unwrap(), 3);
    assert_eq!(round_half_down(1.0).unwrap(), 1);
    assert_eq!(round_half_down(4.0).unwrap(), 4);

    // the three modes disagree exactly on the half grid
    for (score, down, up, even) in [(1.5, 1, 2, 2), (2.5, 2, 3, 2), (3.5, 3, 4, 4)] {
        assert_eq!(Rounding::HalfDown.to_class(score).unwrap(), down);
        assert_eq!(Rounding::HalfUp.to_class(score).unwrap(), up);
        assert_eq!(Rounding::NearestEven.to_class(score).unwrap(), even);
    }

    // negative control: rounding halves up distorts the class priors
    let pairs = parse_pair_fixture(&canonical_pairs_jsonl());
    let aspect = Aspect::empathy();
    let up = empirical_distribution(&pairs, &aspect, Some("train"), Rounding::HalfUp).unwrap();
    assert!(
        (0..4).any(|k| (up[k] - TRAIN_CLASS_SHARES[k]).abs() > 5e-4),
        "half-up shares unexpectedly match: {up:?}"
    );
    let down = empirical_distribution(&pairs, &aspect, Some("train"), Rounding::HalfDown).unwrap();
    assert!((0..4).all(|k| (down[k] - TRAIN_CLASS_SHARES[k]).abs() <= 5e-4));
    println!("[acceptance] criterion 7 threshold and rounding conventions: PASS");
}

#[test]
fn criterion_08_swap_aggregation_symmetry() {
    let preds = parse_pred_fixture(&swap_preds_jsonl());
    let mean = swap_aggregate(&preds, SwapMode::Mean).unwrap();
    assert!(mean.warnings.is_empty());
    let records: Vec<&PredictionRecord> = mean.preds.iter().collect();
    assert_eq!(records.len(), 6);
    for (i, rec) in records.iter().enumerate() {
        let s = 1.5 + i as f64 * 0.4;
        let r = s + 0.2;
        assert_eq!(rec.pair_id, format!("w{i:02}"));
        assert_eq!(rec.variant, Variant::Mean);
        assert_eq!(rec.score.to_bits(), ((s + r) / 2.0).to_bits());
    }

    // relabeling the two variants must not move the mean by a single bit
    let flipped: Vec<PredictionRecord> = preds
        .iter()
        .cloned()
        .map(|mut rec| {
            rec.variant = match rec.variant {
                Variant::Standard => Variant::Reverse,
                Variant::Reverse => Variant::Standard,
                Variant::Mean => Variant::Mean,
            };
            rec
        })
        .collect();
    let flipped_mean = swap_aggregate(&PredictionSet::new(flipped).unwrap(), SwapMode::Mean).unwrap();
    for (a, b) in mean.preds.iter().zip(flipped_mean.preds.iter()) {
        assert_eq!(a.pair_id, b.pair_id);
        assert_eq!(a.score.to_bits(), b.score.to_bits());
    }

    // averaging scores discards class distributions
    let with_probs = vec![
        PredictionRecord {
            pair_id: "x1".into(),
            aspect: Aspect::empathy(),
            variant: Variant::Standard,
            score: 2.0,
            probs: Some([0.25, 0.25, 0.25, 0.25]),
            source: None,
        },
        PredictionRecord {
            pair_id: "x1".into(),
            aspect: Aspect::empathy(),
            variant: Variant::Reverse,
            score: 3.0,
            probs: Some([0.25, 0.25, 0.25, 0.25]),
            source: None,
        },
    ];
    let agg = swap_aggregate(&PredictionSet::new(with_probs).unwrap(), SwapMode::Mean).unwrap();
    assert_eq!(agg.preds.len(), 1);
    let merged = agg.preds.iter().next().unwrap();
    assert!(merged.probs.is_none());
    assert_eq!(merged.score, 2.5);
    println!("[acceptance] criterion 8 swap aggregation symmetry: PASS");
}

#[test]
fn criterion_09_agreement_ground_truths() {
    // unanimity scores 1 exactly whenever any cross-item variation exists
    let unanimous = vec![vec![2.0, 2.0, 2.0], vec![3.5, 3.5], vec![1.0, 1.0]];
    for level in [AlphaLevel::Nominal, AlphaLevel::Interval] {
        assert_eq!(alpha_from_units(&unanimous, level).unwrap(), Some(1.0));
    }
    let same: Vec<AnnotationValue> = [1.0, 2.0, 3.0, 1.0, 2.0]
        .iter()
        .map(|&v| AnnotationValue::Score(v))
        .collect();
    assert_eq!(
        cohen_kappa(&same, &same, Discretizer::HalfDownInt).unwrap(),
        Some(1.0)
    );

    // perfect systematic disagreement with symmetric marginals
    let a: Vec<AnnotationValue> = [1.0, 1.0, 2.0, 2.0]
        .iter()
        .map(|&v| AnnotationValue::Score(v))
        .collect();
    let b: Vec<AnnotationValue> = [2.0, 2.0, 1.0, 1.0]
        .iter()
        .map(|&v| AnnotationValue::Score(v))
        .collect();
    assert_eq!(
        cohen_kappa(&a, &b, Discretizer::HalfDownInt).unwrap(),
        Some(-1.0)
    );

    // with two annotators the pairwise mean is the lone pairwise value
    let vals1 = [1.0, 2.5, 3.0, 4.0, 2.0, 1.5];
    let vals2 = [1.5, 2.0, 3.5, 3.5, 2.5, 1.0];
    let mut records = Vec::new();
    for (p, (&x, &y)) in vals1.iter().zip(vals2.iter()).enumerate() {
        for (rater, value) in [("m1", x), ("m2", y)] {
            records.push(AnnotationRecord {
                annotator_id: rater.into(),
                pair_id: format!("z{p}"),
                aspect: Aspect::empathy(),
                setting: Setting::Summary,
                value: AnnotationValue::Score(value),
            });
        }
    }
    let set = AnnotationSet::new(records).unwrap();
    let mp = mean_pairwise(
        &set,
        &Aspect::empathy(),
        Setting::Summary,
        AgreementMetric::Pearson,
    )
    .unwrap();
    assert_eq!(mp.cells.len(), 1);
    assert_eq!(mp.pairs_used, 1);
    let direct = pearson(&vals1, &vals2).unwrap().unwrap();
    assert_eq!(mp.mean.unwrap(), direct);

    // interval reliability ignores affine rescaling of every rating
    let units = vec![
        vec![1.0, 2.0, 3.0],
        vec![2.5, 3.0],
        vec![1.0, 1.0, 4.0],
        vec![3.5, 2.0],
    ];
    let mapped: Vec<Vec<f64>> = units
        .iter()
        .map(|u| u.iter().map(|&v| 2.5 * v - 1.0).collect())
        .collect();
    let base = alpha_from_units(&units, AlphaLevel::Interval)
        .unwrap()
        .unwrap();
    let shifted = alpha_from_units(&mapped, AlphaLevel::Interval)
        .unwrap()
        .unwrap();
    assert!((base - shifted).abs() <= 1e-10, "{base} vs {shifted}");
    println!("[acceptance] criterion 9 agreement ground truths: PASS");
}

#[test]
fn criterion_10_cli_byte_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (pairs, ids) = small_pairs_jsonl();
    write_file(dir.path(), "pairs.jsonl", &pairs);
    write_file(dir.path(), "preds.jsonl", &small_preds_jsonl(false));
    write_file(dir.path(), "probs.jsonl", &small_preds_jsonl(true));
    write_file(dir.path(), "embs.jsonl", &embeddings_jsonl(&ids, 8, 42));
    write_file(dir.path(), "ann.csv", &annotations_csv());
    write_file(dir.path(), "ref.csv", &reference_csv());
    write_file(dir.path(), "batch.jsonl", &batch_jsonl());

    let commands: Vec<Vec<&str>> = vec![
        vec!["evaluate", "--pairs", "pairs.jsonl", "--preds", "preds.jsonl", "--aspect", "empathy"],
        vec![
            "evaluate", "--pairs", "pairs.jsonl", "--preds", "preds.jsonl", "--aspect",
            "empathy", "--format", "json",
        ],
        vec![
            "evaluate", "--pairs", "pairs.jsonl", "--preds", "preds.jsonl", "--aspect",
            "empathy", "--format", "csv",
        ],
        vec!["score", "--pairs", "pairs.jsonl", "--embeddings", "embs.jsonl"],
        vec![
            "train-head", "--pairs", "pairs.jsonl", "--embeddings", "embs.jsonl",
            "--train-aspect", "empathy", "--loss", "cosine_mse", "--epochs", "3", "--seed", "5",
            "--out-dim", "4", "--format", "json",
        ],
        vec!["loss-eval", "--batch", "batch.jsonl", "--loss", "angle", "--grad-check"],
        vec!["agreement", "--annotations", "ann.csv"],
        vec![
            "agreement", "--annotations", "ann.csv", "--aspect", "empathy", "--setting",
            "summary", "--reference", "ref.csv",
        ],
        vec!["aspect-corr", "--pairs", "pairs.jsonl"],
        vec!["diagnose", "errors", "--pairs", "pairs.jsonl", "--preds", "preds.jsonl", "--aspect", "empathy"],
        vec!["diagnose", "bottleneck", "--pairs", "pairs.jsonl", "--preds", "probs.jsonl", "--aspect", "empathy"],
        vec!["diagnose", "confusion", "--pairs", "pairs.jsonl", "--preds", "probs.jsonl", "--aspect", "empathy"],
    ];
    for command in &commands {
        let first = run_in(dir.path(), command);
        let second = run_in(dir.path(), command);
        assert_eq!(first.status.code(), Some(0), "{command:?}");
        assert_eq!(second.status.code(), Some(0), "{command:?}");
        assert_eq!(first.stdout, second.stdout, "{command:?} stdout drifted");
        assert_eq!(first.stderr, second.stderr, "{command:?} stderr drifted");
    }

    // artifacts written through --out repeat byte for byte as well
    let mut out_cmd: Vec<&str> = commands[0].clone();
    out_cmd.extend(["--out", "report.md"]);
    run_in(dir.path(), &out_cmd);
    let first = std::fs::read(dir.path().join("report.md")).unwrap();
    run_in(dir.path(), &out_cmd);
    let second = std::fs::read(dir.path().join("report.md")).unwrap();
    assert_eq!(first, second);
    println!("[acceptance] criterion 10 cli byte determinism: PASS");
}
