//! Training objectives over batches of embedding pairs, with analytic
//! gradients and a central-difference checker.
//!
//! All four losses consume cosine geometry only, so they are invariant to
//! positive per-vector rescaling. Values are always finite and non-negative;
//! ranking losses use log-sum-exp with max subtraction.

use serde::{Deserialize, Serialize};

use crate::data::bin_label;
use crate::error::{Error, Result};

/// Margin and temperature shared by the loss family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    /// Hinge margin on cosine distance for the contrastive loss.
    pub margin: f64,
    /// Temperature multiplying score differences in the ranking losses.
    pub lambda: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig {
            margin: 0.5,
            lambda: 20.0,
        }
    }
}

/// Loss selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossKind {
    CosineMse,
    Contrastive,
    Cosent,
    Angle,
}

impl LossKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "cosine_mse" => Ok(LossKind::CosineMse),
            "contrastive" => Ok(LossKind::Contrastive),
            "cosent" => Ok(LossKind::Cosent),
            "angle" => Ok(LossKind::Angle),
            other => Err(Error::Format(format!("unknown loss {other:?}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LossKind::CosineMse => "cosine_mse",
            LossKind::Contrastive => "contrastive",
            LossKind::Cosent => "cosent",
            LossKind::Angle => "angle",
        }
    }

    pub const ALL: [LossKind; 4] = [
        LossKind::CosineMse,
        LossKind::Contrastive,
        LossKind::Cosent,
        LossKind::Angle,
    ];

    pub fn evaluate(self, batch: &PairBatch, config: &LossConfig) -> Result<LossResult> {
        match self {
            LossKind::CosineMse => loss_cosine_mse(batch, config),
            LossKind::Contrastive => loss_contrastive(batch, config),
            LossKind::Cosent => loss_cosent(batch, config),
            LossKind::Angle => loss_angle(batch, config),
        }
    }
}

impl std::fmt::Display for LossKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A batch of aligned vector pairs with gold labels in [1, 4].
/// Binary labels derive from the 2.5 threshold unless overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBatch {
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    labels: Vec<f64>,
    binary: Vec<u8>,
}

impl PairBatch {
    pub fn new(u: Vec<Vec<f64>>, v: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        let binary = labels.iter().map(|&s| bin_label(s, 2.5)).collect();
        PairBatch::with_binary(u, v, labels, binary)
    }

    pub fn with_binary(
        u: Vec<Vec<f64>>,
        v: Vec<Vec<f64>>,
        labels: Vec<f64>,
        binary: Vec<u8>,
    ) -> Result<Self> {
        if u.len() != v.len() || u.len() != labels.len() || u.len() != binary.len() {
            return Err(Error::Shape(format!(
                "batch sides disagree: {} u, {} v, {} labels, {} binary",
                u.len(),
                v.len(),
                labels.len(),
                binary.len()
            )));
        }
        if u.is_empty() {
            return Err(Error::Insufficient("empty batch".into()));
        }
        let dim = u[0].len();
        if dim == 0 {
            return Err(Error::Shape("zero-dimensional vectors".into()));
        }
        for (i, (a, b)) in u.iter().zip(v.iter()).enumerate() {
            if a.len() != dim || b.len() != dim {
                return Err(Error::Shape(format!(
                    "item {i}: dims {} and {} differ from batch dim {dim}",
                    a.len(),
                    b.len()
                )));
            }
            if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!("item {i}: non-finite vector entry")));
            }
        }
        for (i, &s) in labels.iter().enumerate() {
            if !s.is_finite() || !(1.0..=4.0).contains(&s) {
                return Err(Error::Range(format!("label {s} at item {i} outside [1, 4]")));
            }
        }
        for (i, &y) in binary.iter().enumerate() {
            if y > 1 {
                return Err(Error::Range(format!("binary label {y} at item {i}")));
            }
        }
        Ok(PairBatch {
            u,
            v,
            labels,
            binary,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.u[0].len()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn binary(&self) -> &[u8] {
        &self.binary
    }

    pub fn u(&self) -> &[Vec<f64>] {
        &self.u
    }

    pub fn v(&self) -> &[Vec<f64>] {
        &self.v
    }
}

/// Loss value with gradients per batch item and input side.
#[derive(Debug, Clone, PartialEq)]
pub struct LossResult {
    pub value: f64,
    pub grad_u: Vec<Vec<f64>>,
    pub grad_v: Vec<Vec<f64>>,
}

impl LossResult {
    /// Euclidean norm over every gradient entry.
    pub fn grad_norm(&self) -> f64 {
        let mut acc = 0.0;
        for g in self.grad_u.iter().chain(self.grad_v.iter()) {
            for x in g {
                acc += x * x;
            }
        }
        acc.sqrt()
    }
}

fn norm(x: &[f64]) -> f64 {
    let mut acc = 0.0;
    for v in x {
        acc += v * v;
    }
    acc.sqrt()
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..x.len() {
        acc += x[i] * y[i];
    }
    acc
}

/// Cosine similarity, clamped into [-1, 1] against rounding spill.
pub fn cosine_sim(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Shape(format!(
            "length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Domain("cosine of a zero vector".into()));
    }
    Ok((dot(u, v) / (nu * nv)).clamp(-1.0, 1.0))
}

/// Cosine with gradients for both inputs.
fn cosine_with_grad(u: &[f64], v: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Domain("cosine of a zero vector".into()));
    }
    let inv = 1.0 / (nu * nv);
    let c = dot(u, v) * inv;
    let mut du = vec![0.0; u.len()];
    let mut dv = vec![0.0; v.len()];
    for k in 0..u.len() {
        du[k] = v[k] * inv - c * u[k] / (nu * nu);
        dv[k] = u[k] * inv - c * v[k] / (nv * nv);
    }
    Ok((c, du, dv))
}

fn zero_grads(batch: &PairBatch) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let z = vec![vec![0.0; batch.dim()]; batch.len()];
    (z.clone(), z)
}

/// Mean squared gap between cosine and the label mapped onto [0, 1]
/// by (s - 1) / 3.
pub fn loss_cosine_mse(batch: &PairBatch, _config: &LossConfig) -> Result<LossResult> {
    let n = batch.len() as f64;
    let (mut grad_u, mut grad_v) = zero_grads(batch);
    let mut value = 0.0;
    for i in 0..batch.len() {
        let (c, dc_du, dc_dv) = cosine_with_grad(&batch.u[i], &batch.v[i])?;
        let target = (batch.labels[i] - 1.0) / 3.0;
        let gap = c - target;
        value += gap * gap;
        let w = 2.0 * gap / n;
        for k in 0..batch.dim() {
            grad_u[i][k] = w * dc_du[k];
            grad_v[i][k] = w * dc_dv[k];
        }
    }
    Ok(LossResult {
        value: value / n,
        grad_u,
        grad_v,
    })
}

/// Hinged pull/push on cosine distance d = 1 - cosine: positives pay d^2,
/// negatives pay max(0, margin - d)^2.
pub fn loss_contrastive(batch: &PairBatch, config: &LossConfig) -> Result<LossResult> {
    let n = batch.len() as f64;
    let m = config.margin;
    let (mut grad_u, mut grad_v) = zero_grads(batch);
    let mut value = 0.0;
    for i in 0..batch.len() {
        let (c, dc_du, dc_dv) = cosine_with_grad(&batch.u[i], &batch.v[i])?;
        let d = 1.0 - c;
        // dl/dc = -dl/dd
        let (item, dl_dc) = if batch.binary[i] == 1 {
            (d * d, -2.0 * d)
        } else if d < m {
            let slack = m - d;
            (slack * slack, 2.0 * slack)
        } else {
            (0.0, 0.0)
        };
        value += item;
        let w = dl_dc / n;
        for k in 0..batch.dim() {
            grad_u[i][k] = w * dc_du[k];
            grad_v[i][k] = w * dc_dv[k];
        }
    }
    Ok(LossResult {
        value: value / n,
        grad_u,
        grad_v,
    })
}

/// Ranking constraints from strict label order: every (i, j) with
/// s_i > s_j contributes one exponent; ties contribute nothing.
fn ordered_constraints(labels: &[f64]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..labels.len() {
        for j in 0..labels.len() {
            if labels[i] > labels[j] {
                out.push((i, j));
            }
        }
    }
    out
}

/// Shared log(1 + sum exp(z)) machinery: returns the loss value and one
/// weight exp(z)/(1 + sum exp(z)) per constraint, computed stably.
fn ranking_softplus(z: &[f64]) -> (f64, Vec<f64>) {
    // the implicit 1 is exp(0), folded into the max subtraction
    let m = z.iter().fold(0.0f64, |acc, &x| acc.max(x));
    let mut denom = (-m).exp();
    let mut shifted = Vec::with_capacity(z.len());
    for &x in z {
        let e = (x - m).exp();
        shifted.push(e);
        denom += e;
    }
    let value = m + denom.ln();
    let weights = shifted.into_iter().map(|e| e / denom).collect();
    (value, weights)
}

/// Rank-consistency loss on cosine scores: log(1 + sum over ordered pairs
/// (i, j) with s_i > s_j of exp(lambda * (cos_j - cos_i))).
pub fn loss_cosent(batch: &PairBatch, config: &LossConfig) -> Result<LossResult> {
    let lambda = config.lambda;
    let mut cosines = Vec::with_capacity(batch.len());
    let mut grads = Vec::with_capacity(batch.len());
    for i in 0..batch.len() {
        let (c, du, dv) = cosine_with_grad(&batch.u[i], &batch.v[i])?;
        cosines.push(c);
        grads.push((du, dv));
    }
    let constraints = ordered_constraints(&batch.labels);
    let z: Vec<f64> = constraints
        .iter()
        .map(|&(i, j)| lambda * (cosines[j] - cosines[i]))
        .collect();
    let (value, weights) = ranking_softplus(&z);

    let mut dl_dc = vec![0.0; batch.len()];
    for (idx, &(i, j)) in constraints.iter().enumerate() {
        dl_dc[j] += lambda * weights[idx];
        dl_dc[i] -= lambda * weights[idx];
    }
    let (mut grad_u, mut grad_v) = zero_grads(batch);
    for i in 0..batch.len() {
        for k in 0..batch.dim() {
            grad_u[i][k] = dl_dc[i] * grads[i].0[k];
            grad_v[i][k] = dl_dc[i] * grads[i].1[k];
        }
    }
    Ok(LossResult {
        value,
        grad_u,
        grad_v,
    })
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Angle distance of one pair under the half-split complex view.
///
/// Splitting u = (a, b) and v = (c, d) and reading them as complex vectors
/// a + bi and c + di, the normalized complex inner product has real part
/// sum(a_k c_k + b_k d_k) / z and imaginary part sum(b_k c_k - a_k d_k) / z
/// with z = |v|^2, both rescaled by |v| / |u|; the distance is the sum of
/// the absolute real and imaginary parts, algebraically
/// (|re| + |im|) / (|u| |v|).
fn angle_distance_with_grad(u: &[f64], v: &[f64]) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let dim = u.len();
    let half = dim / 2;
    let (a, b) = u.split_at(half);
    let (c, d) = v.split_at(half);
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Domain("angle distance of a zero vector".into()));
    }
    let mut s_re = 0.0;
    let mut s_im = 0.0;
    for k in 0..half {
        s_re += a[k] * c[k] + b[k] * d[k];
        s_im += b[k] * c[k] - a[k] * d[k];
    }
    let inv = 1.0 / (nu * nv);
    let g = (s_re.abs() + s_im.abs()) * inv;
    let (sr, si) = (sign(s_re), sign(s_im));

    let mut dg_du = vec![0.0; dim];
    let mut dg_dv = vec![0.0; dim];
    for k in 0..half {
        // dS_re/da = c, dS_re/db = d; dS_im/da = -d, dS_im/db = c
        dg_du[k] = (sr * c[k] + si * -d[k]) * inv - g * u[k] / (nu * nu);
        dg_du[half + k] = (sr * d[k] + si * c[k]) * inv - g * u[half + k] / (nu * nu);
        // dS_re/dc = a, dS_re/dd = b; dS_im/dc = b, dS_im/dd = -a
        dg_dv[k] = (sr * a[k] + si * b[k]) * inv - g * v[k] / (nv * nv);
        dg_dv[half + k] = (sr * b[k] + si * -a[k]) * inv - g * v[half + k] / (nv * nv);
    }
    Ok((g, dg_du, dg_dv))
}

/// Ranking loss on the complex-view angle distance: pairs with higher gold
/// similarity are pushed toward smaller distance via log(1 + sum over
/// (i, j) with s_i > s_j of exp(lambda * (g_i - g_j))).
pub fn loss_angle(batch: &PairBatch, config: &LossConfig) -> Result<LossResult> {
    if !batch.dim().is_multiple_of(2) || batch.dim() < 2 {
        return Err(Error::Shape(format!(
            "angle loss needs an even dimension of at least 2, got {}",
            batch.dim()
        )));
    }
    let lambda = config.lambda;
    let mut dist = Vec::with_capacity(batch.len());
    let mut grads = Vec::with_capacity(batch.len());
    for i in 0..batch.len() {
        let (g, du, dv) = angle_distance_with_grad(&batch.u[i], &batch.v[i])?;
        dist.push(g);
        grads.push((du, dv));
    }
    let constraints = ordered_constraints(&batch.labels);
    let z: Vec<f64> = constraints
        .iter()
        .map(|&(i, j)| lambda * (dist[i] - dist[j]))
        .collect();
    let (value, weights) = ranking_softplus(&z);

    let mut dl_dg = vec![0.0; batch.len()];
    for (idx, &(i, j)) in constraints.iter().enumerate() {
        dl_dg[i] += lambda * weights[idx];
        dl_dg[j] -= lambda * weights[idx];
    }
    let (mut grad_u, mut grad_v) = zero_grads(batch);
    for i in 0..batch.len() {
        for k in 0..batch.dim() {
            grad_u[i][k] = dl_dg[i] * grads[i].0[k];
            grad_v[i][k] = dl_dg[i] * grads[i].1[k];
        }
    }
    Ok(LossResult {
        value,
        grad_u,
        grad_v,
    })
}

/// Central-difference gradients of a loss over every batch coordinate:
/// (f(x + h) - f(x - h)) / 2h.
pub fn finite_diff_grad(
    kind: LossKind,
    batch: &PairBatch,
    config: &LossConfig,
    h: f64,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let n = batch.len();
    let dim = batch.dim();
    let mut grad_u = vec![vec![0.0; dim]; n];
    let mut grad_v = vec![vec![0.0; dim]; n];
    let mut work = batch.clone();
    for i in 0..n {
        for k in 0..dim {
            for (side, grad) in [(0, &mut grad_u), (1, &mut grad_v)] {
                let slot = if side == 0 {
                    &mut work.u[i][k]
                } else {
                    &mut work.v[i][k]
                };
                let orig = *slot;
                *slot = orig + h;
                let plus = kind.evaluate(&work, config)?.value;
                work_set(&mut work, side, i, k, orig - h);
                let minus = kind.evaluate(&work, config)?.value;
                work_set(&mut work, side, i, k, orig);
                grad[i][k] = (plus - minus) / (2.0 * h);
            }
        }
    }
    Ok((grad_u, grad_v))
}

fn work_set(batch: &mut PairBatch, side: usize, i: usize, k: usize, value: f64) {
    if side == 0 {
        batch.u[i][k] = value;
    } else {
        batch.v[i][k] = value;
    }
}
