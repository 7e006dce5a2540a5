//! Concrete operator models and their Cesàro machinery.
//!
//! Three models cover the territory: the backward shift on a weighted
//! square-summable sequence space (not power-bounded for light weights),
//! the complemented Volterra operator `T = I - V` on a uniform grid over
//! [0,1] (integration by the trapezoid rule), and dense matrices.
//!
//! The Cesàro sum of order `a` is `Delta_a(n) x = sum_{j<=n} k^a(n-j) T^j x`
//! and the mean is `M_a(n) = Delta_a(n) / k^(a+1)(n)`. Everything here is
//! built on one streaming pass over the power orbit `T^j x`: checkpointed
//! Cesàro sums, weighted series of them, mean trajectories and norm-growth
//! probes all share it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cesaro::k_row;
use crate::error::{Error, Result};
use crate::special;
use crate::sumtail;

/// Which space a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SpaceTag {
    /// Weighted square-summable sequences: norm^2 = sum |f(j)|^2 k^b(j).
    Ell2Beta { beta: f64 },
    /// Grid functions on [0,1] with the discrete L^p norm (trapezoid
    /// weights).
    Grid01 { p: f64, grid_n: usize },
    /// Plain Euclidean coordinates.
    Plain { dim: usize },
}

impl SpaceTag {
    fn compatible(&self, other: &SpaceTag) -> bool {
        match (self, other) {
            (SpaceTag::Ell2Beta { beta: a }, SpaceTag::Ell2Beta { beta: b }) => a == b,
            (SpaceTag::Grid01 { grid_n: a, .. }, SpaceTag::Grid01 { grid_n: b, .. }) => a == b,
            (SpaceTag::Plain { dim: a }, SpaceTag::Plain { dim: b }) => a == b,
            _ => false,
        }
    }
}

/// A state vector together with its space.
#[derive(Debug, Clone)]
pub struct WeightedVector {
    pub entries: DVector<f64>,
    pub space: SpaceTag,
}

impl WeightedVector {
    pub fn new(entries: DVector<f64>, space: SpaceTag) -> Self {
        WeightedVector { entries, space }
    }

    pub fn from_slice(values: &[f64], space: SpaceTag) -> Self {
        WeightedVector::new(DVector::from_column_slice(values), space)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Space norm: weighted l^2, trapezoid L^p, or Euclidean.
    pub fn norm(&self) -> f64 {
        match self.space {
            SpaceTag::Ell2Beta { beta } => {
                let w = k_row(beta, self.entries.len() - 1);
                self.entries
                    .iter()
                    .zip(&w)
                    .map(|(&v, &kw)| v * v * kw)
                    .sum::<f64>()
                    .sqrt()
            }
            SpaceTag::Grid01 { p, grid_n } => {
                let h = 1.0 / grid_n as f64;
                let mut acc = 0.0;
                for (i, &v) in self.entries.iter().enumerate() {
                    let w = if i == 0 || i == grid_n { 0.5 } else { 1.0 };
                    acc += w * v.abs().powf(p);
                }
                (acc * h).powf(1.0 / p)
            }
            SpaceTag::Plain { .. } => self.entries.norm(),
        }
    }

    pub fn zeros_like(&self) -> Self {
        WeightedVector::new(DVector::zeros(self.entries.len()), self.space)
    }
}

/// Bounded-operator models with an apply-to-vector contract.
#[derive(Debug, Clone)]
pub enum LinOp {
    /// `(T f)(j) = f(j+1)` on the weighted sequence space; vectors are
    /// zero-extended past the truncation.
    BackwardShift { beta: f64, len: usize },
    /// `T = I - V` with `V f(t) = int_0^t f`, trapezoid rule on a uniform
    /// grid.
    VolterraComplement { grid_n: usize },
    /// Dense square matrix on plain coordinates.
    Dense { m: DMatrix<f64> },
}

impl LinOp {
    pub fn shift(beta: f64, len: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::Domain(format!(
                "shift weight must satisfy 0 < beta < 1, got {beta}"
            )));
        }
        Ok(LinOp::BackwardShift { beta, len })
    }

    pub fn volterra(grid_n: usize) -> Result<Self> {
        if grid_n < 2 {
            return Err(Error::InvalidInput("volterra grid too small".into()));
        }
        Ok(LinOp::VolterraComplement { grid_n })
    }

    pub fn dense(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput("dense operator must be square".into()));
        }
        Ok(LinOp::Dense { m })
    }

    /// Dense operator from row-major data (the CSV loading path).
    pub fn dense_from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(
                "dense operator data must be square and nonempty".into(),
            ));
        }
        LinOp::dense(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// The space this operator acts on.
    pub fn space(&self) -> SpaceTag {
        match self {
            LinOp::BackwardShift { beta, .. } => SpaceTag::Ell2Beta { beta: *beta },
            LinOp::VolterraComplement { grid_n } => SpaceTag::Grid01 {
                p: 2.0,
                grid_n: *grid_n,
            },
            LinOp::Dense { m } => SpaceTag::Plain { dim: m.nrows() },
        }
    }

    pub fn vector_len(&self) -> usize {
        match self {
            LinOp::BackwardShift { len, .. } => *len,
            LinOp::VolterraComplement { grid_n } => grid_n + 1,
            LinOp::Dense { m } => m.nrows(),
        }
    }

    fn check_space(&self, x: &WeightedVector) -> Result<()> {
        if !self.space().compatible(&x.space) {
            return Err(Error::SpaceMismatch(format!(
                "operator on {:?} applied to vector in {:?}",
                self.space(),
                x.space
            )));
        }
        if x.entries.len() != self.vector_len() {
            return Err(Error::SpaceMismatch(format!(
                "operator dimension {} vs vector length {}",
                self.vector_len(),
                x.entries.len()
            )));
        }
        Ok(())
    }

    pub(crate) fn apply_raw(&self, x: &DVector<f64>) -> DVector<f64> {
        match self {
            LinOp::BackwardShift { .. } => {
                let n = x.len();
                let mut out = DVector::zeros(n);
                for j in 0..n - 1 {
                    out[j] = x[j + 1];
                }
                // last entry reads the zero extension
                out
            }
            LinOp::VolterraComplement { grid_n } => {
                let h = 1.0 / *grid_n as f64;
                let mut out = DVector::zeros(x.len());
                let mut integral = 0.0;
                out[0] = x[0];
                for i in 1..x.len() {
                    integral += 0.5 * h * (x[i - 1] + x[i]);
                    out[i] = x[i] - integral;
                }
                out
            }
            LinOp::Dense { m } => m * x,
        }
    }

    /// Apply the operator once.
    pub fn apply(&self, x: &WeightedVector) -> Result<WeightedVector> {
        self.check_space(x)?;
        Ok(WeightedVector::new(self.apply_raw(&x.entries), x.space))
    }

    /// Length of the index window unaffected by the zero extension after
    /// `steps` applications (relevant for the shift; the other models are
    /// truncation-free).
    pub fn unaffected_window(&self, steps: usize) -> usize {
        match self {
            LinOp::BackwardShift { len, .. } => len.saturating_sub(steps),
            _ => self.vector_len(),
        }
    }

    /// Seeded probe vector in this operator's space.
    pub fn random_probe(&self, seed: u64) -> WeightedVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = self.vector_len();
        let entries =
            DVector::from_iterator(len, (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)));
        WeightedVector::new(entries, self.space())
    }

    /// Basis probe `e_j`.
    pub fn basis_probe(&self, j: usize) -> WeightedVector {
        let mut v = DVector::zeros(self.vector_len());
        v[j.min(self.vector_len() - 1)] = 1.0;
        WeightedVector::new(v, self.space())
    }
}

/// Power orbit and Cesàro sums of one base point, grown on demand.
///
/// Stores `T^j x` and `Delta_a(n) x` up to the extension horizon; each new
/// Cesàro sum is assembled from the cached orbit and must agree with a
/// direct evaluation (tested). Intended for the moderate horizons of the
/// identity checks; the streaming passes below handle long series without
/// storing the orbit.
pub struct CesaroCache {
    op: LinOp,
    alpha: f64,
    powers: Vec<DVector<f64>>,
    deltas: Vec<DVector<f64>>,
    weights: Vec<f64>,
    space: SpaceTag,
}

impl CesaroCache {
    pub fn new(op: &LinOp, alpha: f64, x: &WeightedVector) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::Domain("cesaro order must be >= 0".into()));
        }
        op.check_space(x)?;
        Ok(CesaroCache {
            op: op.clone(),
            alpha,
            powers: vec![x.entries.clone()],
            deltas: vec![x.entries.clone()],
            weights: vec![1.0],
            space: x.space,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn extend_to(&mut self, n: usize) {
        while self.powers.len() <= n {
            let next = self.op.apply_raw(self.powers.last().unwrap());
            self.powers.push(next);
            let m = self.weights.len() as f64;
            let w = self.weights.last().unwrap() * (m + self.alpha - 1.0) / m;
            self.weights.push(w);
            // Delta_a(n) x = sum_{j<=n} k^a(n-j) T^j x
            let nn = self.powers.len() - 1;
            let mut acc = DVector::zeros(self.powers[0].len());
            for (j, p) in self.powers.iter().enumerate() {
                acc += p * self.weights[nn - j];
            }
            self.deltas.push(acc);
        }
    }

    /// `Delta_a(n) x` from the cache.
    pub fn cesaro_sum(&mut self, n: usize) -> WeightedVector {
        self.extend_to(n);
        WeightedVector::new(self.deltas[n].clone(), self.space)
    }

    /// `M_a(n) x = Delta_a(n) x / k^(a+1)(n)`.
    pub fn cesaro_mean(&mut self, n: usize) -> WeightedVector {
        self.extend_to(n);
        let kw = k_row(self.alpha + 1.0, n);
        WeightedVector::new(&self.deltas[n] / kw[n], self.space)
    }

    pub fn power(&mut self, n: usize) -> WeightedVector {
        self.extend_to(n);
        WeightedVector::new(self.powers[n].clone(), self.space)
    }
}

/// Free-function form of the cache lookup.
pub fn cesaro_sum(cache: &mut CesaroCache, n: usize) -> WeightedVector {
    cache.cesaro_sum(n)
}

/// Streaming evaluation of `Delta_a(n) x` at a sorted list of indices:
/// one pass over the orbit, no orbit storage.
pub fn delta_at(
    op: &LinOp,
    x: &WeightedVector,
    alpha: f64,
    ns: &[usize],
) -> Result<Vec<WeightedVector>> {
    op.check_space(x)?;
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let kw = k_row(alpha, n_max);
    let mut accs: Vec<DVector<f64>> = ns.iter().map(|_| DVector::zeros(x.len())).collect();
    let mut p = x.entries.clone();
    for j in 0..=n_max {
        for (i, &n) in ns.iter().enumerate() {
            if j <= n {
                accs[i] += &p * kw[n - j];
            }
        }
        if j < n_max {
            p = self_apply(op, p);
        }
    }
    Ok(accs
        .into_iter()
        .map(|a| WeightedVector::new(a, x.space))
        .collect())
}

fn self_apply(op: &LinOp, p: DVector<f64>) -> DVector<f64> {
    op.apply_raw(&p)
}

/// Geometric checkpoint grid for series diagnostics: 0 and quarter-octave
/// spacing from 1 up to `n_max`, always containing the dyadic anchors
/// n_max/8, n_max/4, n_max/2, n_max. The small indices matter for suprema
/// over all n (the boundedness constant often peaks at n = 0).
pub(crate) fn checkpoint_grid(n_max: usize) -> Vec<usize> {
    let mut cps = vec![0];
    let mut v = 1.0f64;
    // stop half a step short of n_max so the final window is never a
    // near-duplicate of the horizon checkpoint
    while v < n_max as f64 * 0.9 {
        cps.push(v as usize);
        v *= 2f64.powf(0.25);
    }
    for anchor in [n_max / 8, n_max / 4, n_max / 2, n_max] {
        if anchor >= 1 {
            cps.push(anchor);
        }
    }
    cps.sort_unstable();
    cps.dedup();
    cps
}

/// Output of a checkpointed series pass: partial sums of the weighted
/// series at the checkpoints plus the norms of the summand carriers
/// (Cesàro sums or bare powers) there.
pub(crate) struct SeriesPass {
    pub checkpoints: Vec<usize>,
    pub partials: Vec<DVector<f64>>,
    pub carrier_norms: Vec<f64>,
    pub space: SpaceTag,
}

/// One streaming pass for `sum_n c(n) Delta_a(n) x`: for each checkpoint
/// segment `(a_k, b_k]` the scalar weights
/// `e_j = sum_{n in segment, n >= j} c(n) k^a(n-j)` are precomputed, so the
/// orbit is traversed exactly once.
pub(crate) fn cesaro_series_pass(
    op: &LinOp,
    x: &WeightedVector,
    alpha: f64,
    coeff: &dyn Fn(usize) -> f64,
    n_max: usize,
) -> Result<SeriesPass> {
    op.check_space(x)?;
    let cps = checkpoint_grid(n_max);
    let kw = k_row(alpha, n_max);
    let cs: Vec<f64> = (0..=n_max).map(coeff).collect();

    // per-segment weight arrays
    let mut seg_weights: Vec<Vec<f64>> = Vec::with_capacity(cps.len());
    let mut lo = 0usize;
    for (k, &b) in cps.iter().enumerate() {
        let mut e = vec![0.0f64; b + 1];
        let start = if k == 0 { 0 } else { lo + 1 };
        for n in start..=b {
            let c = cs[n];
            if c == 0.0 {
                continue;
            }
            for (j, ej) in e.iter_mut().enumerate().take(n + 1) {
                *ej += c * kw[n - j];
            }
        }
        seg_weights.push(e);
        lo = b;
    }

    let dim = x.len();
    let mut seg_accs: Vec<DVector<f64>> = cps.iter().map(|_| DVector::zeros(dim)).collect();
    let mut delta_accs: Vec<DVector<f64>> = cps.iter().map(|_| DVector::zeros(dim)).collect();
    let mut p = x.entries.clone();
    for j in 0..=n_max {
        for (k, &b) in cps.iter().enumerate() {
            if j <= b {
                let e = seg_weights[k][j];
                if e != 0.0 {
                    seg_accs[k] += &p * e;
                }
                delta_accs[k] += &p * kw[b - j];
            }
        }
        if j < n_max {
            p = self_apply(op, p);
            // orbit died out (finite support under the shift): everything
            // past this index contributes zero
            if p.amax() == 0.0 {
                break;
            }
        }
    }

    // cumulative partial sums
    let mut partials = Vec::with_capacity(cps.len());
    let mut acc = DVector::zeros(dim);
    for sa in &seg_accs {
        acc += sa;
        partials.push(acc.clone());
    }
    let carrier_norms = delta_accs
        .iter()
        .map(|d| WeightedVector::new(d.clone(), x.space).norm())
        .collect();
    Ok(SeriesPass {
        checkpoints: cps,
        partials,
        carrier_norms,
        space: x.space,
    })
}

/// Same machinery for plain power series `sum_n c(n) T^n x`.
pub(crate) fn power_series_pass(
    op: &LinOp,
    x: &WeightedVector,
    coeff: &dyn Fn(usize) -> f64,
    n_max: usize,
) -> Result<SeriesPass> {
    op.check_space(x)?;
    let cps = checkpoint_grid(n_max);
    let dim = x.len();
    let mut partials: Vec<DVector<f64>> = Vec::with_capacity(cps.len());
    let mut power_norms: Vec<f64> = Vec::with_capacity(cps.len());
    let mut acc = DVector::zeros(dim);
    let mut p = x.entries.clone();
    let mut next_cp = 0usize;
    for j in 0..=n_max {
        let c = coeff(j);
        if c != 0.0 {
            acc += &p * c;
        }
        while next_cp < cps.len() && cps[next_cp] == j {
            partials.push(acc.clone());
            power_norms.push(WeightedVector::new(p.clone(), x.space).norm());
            next_cp += 1;
        }
        if j < n_max {
            p = self_apply(op, p);
            if p.amax() == 0.0 {
                break;
            }
        }
    }
    while partials.len() < cps.len() {
        partials.push(acc.clone());
        power_norms.push(0.0);
    }
    Ok(SeriesPass {
        checkpoints: cps,
        partials,
        carrier_norms: power_norms,
        space: x.space,
    })
}

/// Boundedness-constant estimate: a lower bound for `sup_n ||M_a(n)||`
/// from probe maximization, plus the growth trend of the probe suprema
/// (a growing trend flags a non-Cesàro-bounded order).
#[derive(Debug, Clone, Serialize)]
pub struct KAlphaEstimate {
    pub k_lower: f64,
    pub growth_slope: f64,
    pub bounded_trend: bool,
    /// supremum over probes of the mean norm at each sampled index
    pub per_n: Vec<(usize, f64)>,
}

pub fn estimate_k_alpha(
    op: &LinOp,
    alpha: f64,
    n_max: usize,
    probe_count: usize,
    seed: u64,
) -> Result<KAlphaEstimate> {
    let cps = checkpoint_grid(n_max);
    let kw1 = k_row(alpha + 1.0, n_max);

    // structured probes: basis vectors and binomial-profile vectors
    let mut probes: Vec<WeightedVector> = Vec::new();
    let len = op.vector_len();
    for j in [0usize, len / 2, len - 1] {
        probes.push(op.basis_probe(j));
    }
    if let LinOp::BackwardShift { .. } = op {
        for gamma in [0.25, 0.45] {
            let prof = k_row(gamma, len - 1);
            probes.push(WeightedVector::from_slice(&prof, op.space()));
        }
    }
    for i in 0..probe_count {
        probes.push(op.random_probe(seed.wrapping_add(i as u64)));
    }

    let sup_per_probe: Vec<Vec<f64>> = probes
        .par_iter()
        .map(|x| {
            let nx = x.norm().max(1e-300);
            let deltas = delta_at(op, x, alpha, &cps)?;
            Ok(deltas
                .iter()
                .zip(&cps)
                .map(|(d, &n)| d.norm() / (kw1[n] * nx))
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut per_n: Vec<(usize, f64)> = cps.iter().map(|&n| (n, 0.0)).collect();
    for row in &sup_per_probe {
        for (slot, &v) in per_n.iter_mut().zip(row) {
            slot.1 = slot.1.max(v);
        }
    }
    let k_lower = per_n.iter().fold(0.0f64, |m, &(_, v)| m.max(v));
    let top = per_n.len() / 2;
    let ns: Vec<f64> = per_n[top..].iter().map(|&(n, _)| n as f64).collect();
    let vs: Vec<f64> = per_n[top..].iter().map(|&(_, v)| v).collect();
    let growth_slope = sumtail::fit_log_slope(&ns, &vs)
        .map(|(s, _, _)| s)
        .unwrap_or(0.0);
    Ok(KAlphaEstimate {
        k_lower,
        growth_slope,
        bounded_trend: growth_slope <= 0.05,
        per_n,
    })
}

/// Residual of the order-lowering identity
///
/// `(I-T) Delta_b(n) x = k^b(n+1) x - sum_{j=0}^{n+1} k^(b-a-1)(n+1-j)
///  Delta_a(j) x`.
pub fn ergodic_identity_residual(
    op: &LinOp,
    alpha: f64,
    beta: f64,
    n: usize,
    x: &WeightedVector,
) -> Result<f64> {
    if !(beta > alpha) {
        return Err(Error::Domain("identity needs beta > alpha".into()));
    }
    let mut cache_b = CesaroCache::new(op, beta, x)?;
    let mut cache_a = CesaroCache::new(op, alpha, x)?;
    let db = cache_b.cesaro_sum(n);
    let lhs = &db.entries - op.apply_raw(&db.entries);

    let kb = k_row(beta, n + 1);
    let kba = k_row(beta - alpha - 1.0, n + 1);
    let mut rhs = &x.entries * kb[n + 1];
    for j in 0..=n + 1 {
        let da = cache_a.cesaro_sum(j);
        rhs -= &da.entries * kba[n + 1 - j];
    }
    Ok(WeightedVector::new(lhs - rhs, x.space).norm())
}

/// Residual of the range identity
/// `Delta_(a+1)(n-1)(T - I) x = Delta_a(n) x - k^(a+1)(n) x`.
pub fn range_identity_residual(
    op: &LinOp,
    alpha: f64,
    n: usize,
    x: &WeightedVector,
) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidInput("identity needs n >= 1".into()));
    }
    let tx = op.apply(x)?;
    let y = WeightedVector::new(&tx.entries - &x.entries, x.space);
    let mut cache_hi = CesaroCache::new(op, alpha + 1.0, &y)?;
    let lhs = cache_hi.cesaro_sum(n - 1);
    let mut cache_a = CesaroCache::new(op, alpha, x)?;
    let da = cache_a.cesaro_sum(n);
    let kw = k_row(alpha + 1.0, n);
    let rhs = &da.entries - &x.entries * kw[n];
    Ok(WeightedVector::new(&lhs.entries - rhs, x.space).norm())
}

/// Norm trajectory `||M_b(n) x||` over a list of indices.
pub fn mean_ergodic_probe(
    op: &LinOp,
    beta: f64,
    x: &WeightedVector,
    n_list: &[usize],
) -> Result<Vec<f64>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let deltas = delta_at(op, x, beta, &ns)?;
    let n_max = *ns.last().unwrap_or(&0);
    let kw = k_row(beta + 1.0, n_max);
    Ok(deltas
        .iter()
        .zip(&ns)
        .map(|(d, &n)| d.norm() / kw[n])
        .collect())
}

/// Spectral inclusion test for dense models: every eigenvalue must lie
/// strictly inside the unit disc or within `eig_tol` of 1.
pub fn spectrum_condition_check(op: &LinOp) -> Result<bool> {
    let m = match op {
        LinOp::Dense { m } => m,
        _ => {
            return Err(Error::InvalidInput(
                "spectral check applies to dense models only".into(),
            ))
        }
    };
    let eig_tol = 1e-8;
    let eigs = m.clone().complex_eigenvalues();
    Ok(eigs
        .iter()
        .all(|l| l.norm() < 1.0 - eig_tol || (l - Complex64::new(1.0, 0.0)).norm() <= eig_tol))
}

/// Outcome of the resolvent-bound verification on a dense model.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventReport {
    pub all_hold: bool,
    /// Smallest of `bound - norm` over the sampled points.
    pub worst_slack: f64,
    pub samples: usize,
}

/// Verify `||(lambda - A)^{-1}|| <= K |lambda|^a / (|lambda-1| - 1)^(a+1)`
/// for `A = I - T` at each sample with `Re lambda < 0`, by direct solves
/// and power iteration on the solve operator.
pub fn resolvent_bound_check(
    op: &LinOp,
    alpha: f64,
    k_alpha: f64,
    lambdas: &[Complex64],
) -> Result<ResolventReport> {
    let m = match op {
        LinOp::Dense { m } => m,
        _ => {
            return Err(Error::InvalidInput(
                "resolvent check applies to dense models only".into(),
            ))
        }
    };
    let dim = m.nrows();
    let a_mat = DMatrix::<f64>::identity(dim, dim) - m;
    let mut worst = f64::INFINITY;
    let mut all_hold = true;
    for (idx, &lam) in lambdas.iter().enumerate() {
        if lam.re >= 0.0 {
            return Err(Error::Domain(format!(
                "resolvent samples must have negative real part, got {lam}"
            )));
        }
        let mut cm = DMatrix::<Complex64>::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                cm[(i, j)] = Complex64::new(-a_mat[(i, j)], 0.0);
            }
            cm[(i, i)] += lam;
        }
        let lu = cm.clone().lu();
        let lu_adj = cm.adjoint().lu();
        // power iteration on B* B with B = (lambda - A)^{-1}
        let mut v = DVector::<Complex64>::from_iterator(
            dim,
            (0..dim).map(|i| Complex64::new(1.0 + ((i + idx) % 7) as f64, 0.3 * i as f64)),
        );
        v /= Complex64::new(v.norm(), 0.0);
        let mut est = 0.0f64;
        for _ in 0..120 {
            let w = lu
                .solve(&v)
                .ok_or_else(|| Error::Numerical("singular resolvent solve".into()))?;
            let u = lu_adj
                .solve(&w)
                .ok_or_else(|| Error::Numerical("singular adjoint solve".into()))?;
            est = w.norm();
            let nu = u.norm();
            if nu == 0.0 {
                break;
            }
            v = u / Complex64::new(nu, 0.0);
        }
        let bound = k_alpha * lam.norm().powf(alpha)
            / ((lam - Complex64::new(1.0, 0.0)).norm() - 1.0).powf(alpha + 1.0);
        let slack = bound - est;
        worst = worst.min(slack);
        if slack < -1e-9 * bound.abs() {
            all_hold = false;
        }
    }
    Ok(ResolventReport {
        all_hold,
        worst_slack: worst,
        samples: lambdas.len(),
    })
}

/// Cesàro mean of the complemented Volterra operator through its
/// convolution form: `M_a(n) f = f - [k^(a+1)(n)]^{-1} (L_{n-1} conv f)`
/// with `L_{n-1}` the generalized Laguerre polynomial of parameter `a+1`,
/// integrated by the trapezoid rule.
pub fn volterra_cesaro_mean(
    op: &LinOp,
    alpha: f64,
    n: usize,
    f: &WeightedVector,
) -> Result<WeightedVector> {
    let grid_n = match op {
        LinOp::VolterraComplement { grid_n } => *grid_n,
        _ => {
            return Err(Error::SpaceMismatch(
                "laguerre mean applies to the volterra model".into(),
            ))
        }
    };
    op.check_space(f)?;
    if n < 1 {
        return Err(Error::InvalidInput("mean index starts at 1".into()));
    }
    let h = 1.0 / grid_n as f64;
    // kernel values on grid differences
    let kernel: Vec<f64> = (0..=grid_n)
        .map(|d| special::laguerre(n - 1, alpha + 1.0, d as f64 * h))
        .collect::<Result<_>>()?;
    let kw = k_row(alpha + 1.0, n);
    let scale = 1.0 / kw[n];
    let mut out = DVector::zeros(grid_n + 1);
    for i in 0..=grid_n {
        // trapezoid over [0, t_i] of L(t_i - u) f(u)
        let mut acc = 0.0;
        if i > 0 {
            for m in 0..=i {
                let w = if m == 0 || m == i { 0.5 } else { 1.0 };
                acc += w * kernel[i - m] * f.entries[m];
            }
            acc *= h;
        }
        out[i] = f.entries[i] - scale * acc;
    }
    Ok(WeightedVector::new(out, f.space))
}

/// Probe-based estimates of `||T^n||` over a list of indices. Includes the
/// basis probes that witness the shift growth exactly.
pub fn power_norm_estimate(
    op: &LinOp,
    n_list: &[usize],
    probe_count: usize,
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let n_max = *ns.last().unwrap_or(&0);
    let len = op.vector_len();
    if n_max >= len {
        return Err(Error::InvalidInput(format!(
            "power horizon {n_max} exceeds the truncation {len}"
        )));
    }
    let mut probes: Vec<WeightedVector> = ns
        .iter()
        .map(|&n| op.basis_probe(n.min(len - 1)))
        .collect();
    for i in 0..probe_count {
        probes.push(op.random_probe(seed.wrapping_add(0x9e37 + i as u64)));
    }
    let per_probe: Vec<Vec<f64>> = probes
        .par_iter()
        .map(|x| {
            let nx = x.norm().max(1e-300);
            let mut p = x.entries.clone();
            let mut out = Vec::with_capacity(ns.len());
            let mut next = 0usize;
            for j in 0..=n_max {
                while next < ns.len() && ns[next] == j {
                    out.push(WeightedVector::new(p.clone(), x.space).norm() / nx);
                    next += 1;
                }
                if j < n_max {
                    p = op.apply_raw(&p);
                }
            }
            out
        })
        .collect();
    let mut sup: Vec<(usize, f64)> = ns.iter().map(|&n| (n, 0.0)).collect();
    for row in &per_probe {
        for (slot, &v) in sup.iter_mut().zip(row) {
            slot.1 = slot.1.max(v);
        }
    }
    Ok(sup)
}
