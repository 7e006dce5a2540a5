//! Series functional calculus for Cesàro-bounded operators: fractional
//! powers `(I-T)^{±s}`, the fractional Poisson solver, `log(I-T)` and the
//! Cesàro-smoothed one-sided Hilbert transform.
//!
//! Every operation sums a weighted series of Cesàro sums (or bare powers)
//! of the operator. The partial sums are checkpointed on a geometric grid;
//! the decay of the summand norms is fitted against the known coefficient
//! asymptotics and classified as convergent, divergent, or neither. For
//! convergent series the dyadic checkpoints feed a tail extrapolation whose
//! stage agreement becomes the reported tail estimate — the raw partial
//! sums of these series can converge as slowly as `n^(s-1)`, far short of
//! the accuracy the residual checks demand.
//!
//! A solver never silently asserts an answer: the report carries the
//! verdict, the number of terms, the tail estimate, and a hypothesis
//! warning when the requested regime is outside what the method supports.

use serde::Serialize;

use crate::algebra::{self, AnalyticFn, NormOptions};
use crate::cesaro::k_row;
use crate::error::{Error, Result};
use crate::fracdiff::TailModel;
use crate::operators::{
    cesaro_series_pass, delta_at, power_series_pass, LinOp, SeriesPass, WeightedVector,
};
use crate::special;
use crate::sumtail;

/// Convergence classification of an adaptive series sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Converged,
    Diverging,
    Inconclusive,
}

/// Result of an adaptive operator-series summation.
#[derive(Debug, Clone)]
pub struct SeriesSumReport {
    pub value: WeightedVector,
    pub terms_used: usize,
    pub tail_norm_estimate: f64,
    pub verdict: Verdict,
    pub cesaro_smoothing_used: bool,
    pub warning: Option<String>,
}

/// Options shared by the series solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Summation horizon.
    pub n_max: usize,
    /// Tail threshold for declaring convergence, relative to the value.
    pub rel_tol: f64,
    /// Residual threshold for the solve-and-check operations.
    pub residual_tol: f64,
    /// Extrapolate the checkpointed partial sums (on by default; switching
    /// it off leaves the raw partial sum and a cruder tail estimate).
    pub extrapolate: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_max: 16_384,
            rel_tol: 1e-7,
            residual_tol: 1e-5,
            extrapolate: true,
        }
    }
}

/// Shared analysis of a checkpointed pass.
///
/// `coeff_exponent` is the exact decay exponent of the scalar coefficients;
/// `carrier_exponent_hint` the theoretical growth exponent of the summand
/// carriers on the convergent branch (`a - 1` for Cesàro sums with a
/// nonzero limit direction), used to snap the fitted slope.
fn analyze_pass(
    pass: &SeriesPass,
    coeff_exponent: f64,
    carrier_exponent_hint: Option<f64>,
    input_scale: f64,
    opts: &SolveOptions,
) -> SeriesSumReport {
    let cps = &pass.checkpoints;
    let m = cps.len();
    let value_raw = pass.partials[m - 1].clone();
    let space = pass.space;

    // carrier growth: fitted over the top half of the checkpoints
    let top = m / 2;
    let ns: Vec<f64> = cps[top..].iter().map(|&n| n as f64).collect();
    let cs: Vec<f64> = pass.carrier_norms[top..].to_vec();
    let dead_orbit = cs.iter().all(|&v| v == 0.0);
    let sigma_fit = sumtail::fit_log_slope(&ns, &cs).map(|(s, _, _)| s);

    // window oscillation of the raw partial sums
    let diffs: Vec<f64> = (1..m)
        .map(|k| {
            WeightedVector::new(&pass.partials[k] - &pass.partials[k - 1], space).norm()
        })
        .collect();
    let wlast = *diffs.last().unwrap_or(&0.0);
    let wnd = &diffs[diffs.len().saturating_sub(8)..];
    let cauchy_ok = dead_orbit
        || wnd.is_empty()
        || (wlast <= wnd[0] * 1.1 + 1e-300
            && wnd.windows(2).filter(|w| w[1] > 1.5 * w[0]).count() <= 2);

    let scale = |v: &WeightedVector| v.norm().max(1e-6 * input_scale).max(1e-300);

    // exact finite sum: the orbit died inside the horizon
    if dead_orbit {
        let value = WeightedVector::new(value_raw, space);
        let tail = value.norm() * 1e-15;
        return SeriesSumReport {
            value,
            terms_used: cps[m - 1],
            tail_norm_estimate: tail,
            verdict: Verdict::Converged,
            cesaro_smoothing_used: false,
            warning: None,
        };
    }

    let sigma = match sigma_fit {
        Some(s) => s,
        None => {
            return SeriesSumReport {
                value: WeightedVector::new(value_raw, space),
                terms_used: cps[m - 1],
                tail_norm_estimate: f64::INFINITY,
                verdict: Verdict::Inconclusive,
                cesaro_smoothing_used: false,
                warning: Some("carrier norms defeat the decay fit".into()),
            };
        }
    };
    // snap to the theoretical growth of the convergent branch when close
    let sigma_snap = match carrier_exponent_hint {
        Some(h) if (sigma - h).abs() < 0.12 => h,
        _ => sigma,
    };
    let theta = coeff_exponent + sigma_snap;
    let zone = 0.08;

    if theta >= -1.0 + zone {
        // terms do not decay summably: divergence
        return SeriesSumReport {
            value: WeightedVector::new(value_raw, space),
            terms_used: cps[m - 1],
            tail_norm_estimate: f64::INFINITY,
            verdict: Verdict::Diverging,
            cesaro_smoothing_used: false,
            warning: None,
        };
    }
    if theta > -1.0 - zone {
        // harmonic zone: check the partial-sum norms for log growth
        let pns: Vec<f64> = pass.partials[top..]
            .iter()
            .map(|p| WeightedVector::new(p.clone(), space).norm())
            .collect();
        let verdict = match sumtail::log_growth_coefficient(&ns, &pns) {
            Some((c, resid)) if c.abs() > 10.0 * resid.max(1e-14) => Verdict::Diverging,
            _ => Verdict::Inconclusive,
        };
        return SeriesSumReport {
            value: WeightedVector::new(value_raw, space),
            terms_used: cps[m - 1],
            tail_norm_estimate: f64::INFINITY,
            verdict,
            cesaro_smoothing_used: false,
            warning: Some("summand decay sits on the harmonic boundary".into()),
        };
    }

    // convergent branch
    let anchors: Vec<usize> = [cps[m - 1] / 8, cps[m - 1] / 4, cps[m - 1] / 2, cps[m - 1]]
        .iter()
        .map(|&a| cps.iter().position(|&c| c == a).unwrap_or(m - 1))
        .collect();
    let p_tail = theta + 1.0;
    // Skip extrapolation only when the window increments have genuinely
    // died (finite or geometric orbits); a small *window* increment does
    // not mean a small remaining tail under power-law decay.
    let tail_dead = wlast <= 1e-12 * scale(&WeightedVector::new(value_raw.clone(), space));
    let (value_vec, tail, smoothed) = if tail_dead || !opts.extrapolate {
        let tail_model = if p_tail < -0.01 {
            wlast * (cps[m - 1] as f64) / (-p_tail) / (cps[m - 1] - cps[m - 2]).max(1) as f64
        } else {
            wlast
        };
        (value_raw.clone(), tail_model.max(wlast), false)
    } else {
        let (v, unc) = sumtail::richardson_ladder4(
            [
                &pass.partials[anchors[0]],
                &pass.partials[anchors[1]],
                &pass.partials[anchors[2]],
                &pass.partials[anchors[3]],
            ],
            p_tail,
        );
        // stage disagreement is the honest quality measure: a wrong tail
        // model inflates it and the verdict degrades to inconclusive
        let floor = WeightedVector::new(v.clone(), space).norm() * 1e-15;
        (v, unc.max(floor), false)
    };

    if std::env::var("FRACCALC_DEBUG").is_ok() {
        eprintln!(
            "analyze: theta={theta:.3} sigma={sigma:.4} snap={sigma_snap:.4} p={p_tail:.3} \
             wlast={wlast:.3e} dead={tail_dead} smoothed={smoothed} tail={tail:.3e} m={m}"
        );
    }
    let value = WeightedVector::new(value_vec, space);
    let verdict = if cauchy_ok && tail <= opts.rel_tol * scale(&value) {
        Verdict::Converged
    } else {
        Verdict::Inconclusive
    };
    SeriesSumReport {
        value,
        terms_used: cps[m - 1],
        tail_norm_estimate: tail,
        verdict,
        cesaro_smoothing_used: smoothed,
        warning: None,
    }
}

/// Apply the series calculus for an algebra member `f`:
/// `sum_n W^a f(n) Delta_a(n) x`.
///
/// The membership of `f` is screened first (windowed norm with tail model);
/// non-members are rejected rather than summed.
pub fn phi_alpha_apply(
    op: &LinOp,
    f: &AnalyticFn,
    alpha: f64,
    x: &WeightedVector,
    tail: &TailModel,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    let norm_opts = NormOptions {
        n_out: 2048.min(f.len().saturating_sub(4)),
        rel_tol: 1e-2,
    };
    let membership = algebra::alpha_norm(f, alpha, tail, &norm_opts)?;
    if !membership.converged {
        return Err(Error::Hypothesis(format!(
            "function {} is not certified in the order-{alpha} algebra \
             (norm tail bound {:.3e})",
            f.coeffs().label(),
            membership.tail_bound
        )));
    }
    let n_max = opts.n_max.min(f.len().saturating_sub(4));
    let w = algebra::walpha_window(f, alpha, tail, n_max + 1)?;
    let pass = cesaro_series_pass(op, x, alpha, &|n| w.get(n).copied().unwrap_or(0.0), n_max)?;
    let hint = f.walpha_exponent(alpha).unwrap_or_else(|| {
        let lo = w.len() / 2;
        let ns: Vec<f64> = (lo..w.len()).map(|n| n as f64).collect();
        sumtail::fit_log_slope(&ns, &w[lo..])
            .map(|(s, _, _)| s)
            .unwrap_or(-2.0)
    });
    Ok(analyze_pass(
        &pass,
        hint,
        Some(alpha - 1.0),
        x.norm(),
        opts,
    ))
}

/// Coefficients `W^a k^(-s)(n)` of the fractional power, by Gamma-ratio
/// recurrence in log space.
fn fractional_power_coeffs(s: f64, alpha: f64, n_max: usize) -> Result<Vec<f64>> {
    let mut c = Vec::with_capacity(n_max + 1);
    let c0 = (special::log_gamma(s + alpha + 1.0)?
        - special::log_gamma(1.0 + s)?
        - special::log_gamma(1.0 + alpha)?)
    .exp();
    c.push(c0);
    if n_max >= 1 {
        // c_1 = G(1+s+a) G(1-s) / (G(-s) G(1+s) G(a+2)), negative for s in (0,1)
        let mag = (special::log_gamma(1.0 + s + alpha)? + special::log_gamma(1.0 - s)?
            - special::log_gamma(1.0 + s)?
            - special::log_gamma(alpha + 2.0)?)
        .exp();
        let c1 = mag / special::gamma_signed(-s)?;
        c.push(c1);
        for n in 1..n_max {
            let nf = n as f64;
            let prev = c[n];
            c.push(prev * (nf - s) / (nf + alpha + 1.0));
        }
    }
    Ok(c)
}

/// `(I-T)^s x` for `0 < s < 1`, by the Cesàro-sum series of order `alpha`.
pub fn fractional_power(
    op: &LinOp,
    s: f64,
    x: &WeightedVector,
    alpha: f64,
    opts: &SolveOptions,
) -> Result<WeightedVector> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!(
            "fractional power needs s in (0,1), got {s}"
        )));
    }
    let cs = fractional_power_coeffs(s, alpha, opts.n_max)?;
    let pass = cesaro_series_pass(op, x, alpha, &|n| cs[n], opts.n_max)?;
    let report = analyze_pass(&pass, -s - alpha - 1.0, Some(alpha - 1.0), x.norm(), opts);
    // the coefficient function lives in the algebra for every order, so
    // divergence here means a broken precondition, not a domain statement
    if report.verdict == Verdict::Diverging {
        return Err(Error::Numerical(
            "fractional-power series diverged; operator is likely not \
             Cesàro-bounded at this order"
                .into(),
        ));
    }
    Ok(report.value)
}

/// Fractional Poisson solve by the Cesàro-sum series:
/// `u = sin(pi s) G(1-s+a)/pi * sum_n G(s+n)/G(n+a+1) Delta_a(n) x`.
///
/// Convergence of the series is the solvability criterion; on a converged
/// verdict the residual `||(I-T)^s u - x||` is checked and a failure
/// downgrades the verdict.
pub fn poisson_solve_cesaro(
    op: &LinOp,
    alpha: f64,
    s: f64,
    x: &WeightedVector,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("poisson needs s in (0,1), got {s}")));
    }
    let n_max = opts.n_max;
    let mut cs = Vec::with_capacity(n_max + 1);
    let c0 = (std::f64::consts::PI * s).sin() / std::f64::consts::PI
        * (special::log_gamma(1.0 - s + alpha)? + special::log_gamma(s)?
            - special::log_gamma(alpha + 1.0)?)
        .exp();
    cs.push(c0);
    for n in 0..n_max {
        let nf = n as f64;
        let prev = cs[n];
        cs.push(prev * (s + nf) / (nf + alpha + 1.0));
    }
    let pass = cesaro_series_pass(op, x, alpha, &|n| cs[n], n_max)?;
    let mut report = analyze_pass(&pass, s - alpha - 1.0, Some(alpha - 1.0), x.norm(), opts);

    if report.verdict == Verdict::Converged {
        let forward = fractional_power(op, s, &report.value, alpha, opts)?;
        let residual =
            WeightedVector::new(&forward.entries - &x.entries, x.space).norm();
        if residual > opts.residual_tol * x.norm().max(1e-300) {
            report.verdict = Verdict::Inconclusive;
            report.warning = Some(format!(
                "solution failed the residual check: {residual:.3e}"
            ));
        }
    }
    Ok(report)
}

/// Fractional Poisson solve by the Taylor series `u = sum_n k^s(n) T^n x`,
/// valid for configured orders `alpha < 1 - s`; outside that range the
/// computation proceeds but is flagged experimental.
pub fn poisson_solve_taylor(
    op: &LinOp,
    s: f64,
    x: &WeightedVector,
    alpha_configured: f64,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("poisson needs s in (0,1), got {s}")));
    }
    let ks = k_row(s, opts.n_max);
    let pass = power_series_pass(op, x, &|n| ks[n], opts.n_max)?;
    let mut report = analyze_pass(&pass, s - 1.0, None, x.norm(), opts);
    if alpha_configured >= 1.0 - s {
        report.warning = Some(format!(
            "Taylor route is established for orders below {} (configured {}); \
             result is experimental",
            1.0 - s,
            alpha_configured
        ));
    }
    Ok(report)
}

/// `log(I-T) x` by the Cesàro-sum series: `(psi(a+1) - psi(1)) x -
/// sum_{n>=1} B(a+1, n) Delta_a(n) x`, with coefficients by ratio
/// recurrence.
pub fn log_operator(
    op: &LinOp,
    alpha: f64,
    x: &WeightedVector,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("log series needs alpha > 0".into()));
    }
    let n_max = opts.n_max;
    let mut cs = vec![0.0f64; n_max + 1];
    if n_max >= 1 {
        cs[1] = 1.0 / (alpha + 1.0); // B(a+1, 1)
        for n in 1..n_max {
            let nf = n as f64;
            cs[n + 1] = cs[n] * nf / (nf + alpha + 1.0);
        }
    }
    let pass = cesaro_series_pass(op, x, alpha, &|n| cs[n], n_max)?;
    let mut report = analyze_pass(&pass, -alpha - 1.0, Some(alpha - 1.0), x.norm(), opts);
    let constant = special::digamma(alpha + 1.0)? - special::digamma(1.0)?;
    report.value = WeightedVector::new(
        &x.entries * constant - &report.value.entries,
        x.space,
    );
    Ok(report)
}

/// `log(I-T) x = -sum_{n>=1} T^n x / n`, the Taylor form valid for
/// configured orders inside (0, 1).
pub fn log_operator_taylor(
    op: &LinOp,
    x: &WeightedVector,
    alpha_configured: f64,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    let pass = power_series_pass(
        op,
        x,
        &|n| if n == 0 { 0.0 } else { -1.0 / n as f64 },
        opts.n_max,
    )?;
    let mut report = analyze_pass(&pass, -1.0, None, x.norm(), opts);
    if !(alpha_configured > 0.0 && alpha_configured < 1.0) {
        report.warning = Some(format!(
            "Taylor logarithm is established for orders in (0,1) (configured \
             {alpha_configured}); result is experimental"
        ));
    }
    Ok(report)
}

/// The Cesàro-smoothed one-sided Hilbert transform
/// `H x = c_a x + sum_{n>=1} B(a+1, n) Delta_a(n) x` with
/// `c_a = -(psi(a+1) - psi(1))`; equals `-log(I-T) x` on its domain, but is
/// computed on an independent coefficient path (per-index Beta values
/// instead of the ratio recurrence).
pub fn hilbert_transform_alpha(
    op: &LinOp,
    alpha: f64,
    x: &WeightedVector,
    opts: &SolveOptions,
) -> Result<SeriesSumReport> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("hilbert series needs alpha > 0".into()));
    }
    let n_max = opts.n_max;
    let cs: Vec<f64> = (0..=n_max)
        .map(|n| {
            if n == 0 {
                Ok(0.0)
            } else {
                special::beta(alpha + 1.0, n as f64)
            }
        })
        .collect::<Result<_>>()?;
    let pass = cesaro_series_pass(op, x, alpha, &|n| cs[n], n_max)?;
    let mut report = analyze_pass(&pass, -alpha - 1.0, Some(alpha - 1.0), x.norm(), opts);
    let c_alpha = -(special::digamma(alpha + 1.0)? - special::digamma(1.0)?);
    report.value = WeightedVector::new(
        &x.entries * c_alpha + &report.value.entries,
        x.space,
    );
    Ok(report)
}

/// Which rate trajectory to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateVariant {
    /// `||M_(a+1)(n) x|| * n^s`
    CesaroMean,
    /// `||(1/n) sum_{j=1}^n T^j x|| * n^s`
    PowerMean,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub trajectory: Vec<(usize, f64)>,
    pub decreasing: bool,
    pub final_over_initial: f64,
}

/// Weighted decay trajectory for range-constructed inputs: the measured
/// quantity must fall toward zero when `x` lies in the fractional range.
pub fn rate_check(
    op: &LinOp,
    alpha: f64,
    s: f64,
    x: &WeightedVector,
    n_list: &[usize],
    variant: RateVariant,
) -> Result<RateReport> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    if ns.is_empty() {
        return Err(Error::InvalidInput("empty index list".into()));
    }
    let values: Vec<(usize, f64)> = match variant {
        RateVariant::CesaroMean => {
            let deltas = delta_at(op, x, alpha + 1.0, &ns)?;
            let kw = k_row(alpha + 2.0, *ns.last().unwrap());
            deltas
                .iter()
                .zip(&ns)
                .map(|(d, &n)| (n, d.norm() / kw[n] * (n as f64).powf(s)))
                .collect()
        }
        RateVariant::PowerMean => {
            let n_max = *ns.last().unwrap();
            let mut acc = x.zeros_like();
            let mut p = x.entries.clone();
            let mut out = Vec::with_capacity(ns.len());
            let mut next = 0usize;
            for j in 0..=n_max {
                if j >= 1 {
                    acc.entries += &p;
                }
                while next < ns.len() && ns[next] == j {
                    let norm = acc.norm() / j.max(1) as f64;
                    out.push((j, norm * (j as f64).powf(s)));
                    next += 1;
                }
                if j < n_max {
                    p = op.apply(&WeightedVector::new(p, x.space))?.entries;
                }
            }
            out
        }
    };
    let mut decreasing = true;
    for w in values.windows(2) {
        if w[1].1 > w[0].1 * 1.1 {
            decreasing = false;
        }
    }
    let final_over_initial = values.last().unwrap().1 / values[0].1.max(1e-300);
    Ok(RateReport {
        trajectory: values,
        decreasing,
        final_over_initial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn zero_op(dim: usize) -> LinOp {
        LinOp::dense(DMatrix::zeros(dim, dim)).unwrap()
    }

    fn shift_op(beta: f64, len: usize) -> LinOp {
        LinOp::shift(beta, len).unwrap()
    }

    /// Random diagonalizable contraction T = V D V^-1 with known inverse,
    /// so matrix functions have an exact eigen-route oracle.
    fn contraction_with_oracle(
        dim: usize,
        seed: u64,
    ) -> (LinOp, DMatrix<f64>, DVector<f64>, DMatrix<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        let v = raw.qr().q();
        let mut mix = DMatrix::identity(dim, dim);
        // shear the orthogonal basis a little so V is not orthogonal
        for i in 0..dim - 1 {
            mix[(i, i + 1)] = 0.3;
        }
        let v = v * mix;
        let d = DVector::from_fn(dim, |i, _| -0.85 + 1.7 * (i as f64 + 0.5) / dim as f64);
        let vinv = v.clone().try_inverse().unwrap();
        let t = &v * DMatrix::from_diagonal(&d) * &vinv;
        (LinOp::dense(t).unwrap(), v, d, vinv)
    }

    #[test]
    fn unit_coefficient_function_is_identity() {
        let op = shift_op(0.6, 128);
        let x = op.random_probe(3);
        let f = AnalyticFn::one(4096);
        let rep = phi_alpha_apply(
            &op,
            &f,
            0.5,
            &x,
            &TailModel::ZeroTail,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, Verdict::Converged);
        let diff = WeightedVector::new(&rep.value.entries - &x.entries, x.space).norm();
        assert!(diff <= 1e-10, "{diff}");
    }

    #[test]
    fn one_minus_z_applies_as_i_minus_t() {
        let op = shift_op(0.6, 256);
        let x = op.random_probe(5);
        // coefficients of 1 - z are the order -1 binomial row
        let f = AnalyticFn::k_power(-1.0, 4096);
        let rep = phi_alpha_apply(
            &op,
            &f,
            0.5,
            &x,
            &TailModel::ZeroTail,
            &SolveOptions::default(),
        )
        .unwrap();
        let tx = op.apply(&x).unwrap();
        let direct = WeightedVector::new(&x.entries - &tx.entries, x.space);
        let diff = WeightedVector::new(&rep.value.entries - &direct.entries, x.space).norm();
        assert!(diff <= 1e-9, "{diff}");
    }

    #[test]
    fn resolvent_coefficients_match_direct_solve() {
        // geometric coefficients p_mu give -(lambda - A)^{-1} at mu = 1 - lambda
        let (op, _, _, _) = contraction_with_oracle(6, 17);
        let m = match &op {
            LinOp::Dense { m } => m.clone(),
            _ => unreachable!(),
        };
        let x = op.random_probe(1);
        let lambda = -2.0f64;
        let mu = 1.0 - lambda; // = 3
        let vals: Vec<f64> = (0..4096).map(|n| mu.powi(-(n as i32 + 1))).collect();
        let f = AnalyticFn::from_coeffs(crate::cesaro::CoeffSeq::new("p_mu", vals).unwrap());
        let rep = phi_alpha_apply(
            &op,
            &f,
            0.4,
            &x,
            &f.coeff_tail_model(),
            &SolveOptions::default(),
        )
        .unwrap();
        // direct solve of (lambda - A) y = x, A = I - T
        let dim = 6;
        let a = DMatrix::<f64>::identity(dim, dim) - &m;
        let sys = DMatrix::<f64>::identity(dim, dim) * lambda - a;
        let y = sys.lu().solve(&x.entries).unwrap();
        let diff = (&rep.value.entries + y).norm();
        assert!(diff <= 1e-8, "{diff}");
    }

    #[test]
    fn non_member_rejected() {
        let op = zero_op(4);
        let x = op.random_probe(2);
        let f = AnalyticFn::k_power(0.5, 4096);
        let err = phi_alpha_apply(
            &op,
            &f,
            0.5,
            &x,
            &f.coeff_tail_model(),
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn fractional_power_on_zero_operator_is_identity() {
        let op = zero_op(5);
        let x = op.random_probe(8);
        let y = fractional_power(&op, 0.4, &x, 0.7, &SolveOptions::default()).unwrap();
        let diff = (&y.entries - &x.entries).norm();
        assert!(diff <= 1e-9, "{diff}");
    }

    #[test]
    fn fractional_power_semigroup_law() {
        let (op, _, _, _) = contraction_with_oracle(6, 23);
        let x = op.random_probe(4);
        let opts = SolveOptions::default();
        let alpha = 0.5;
        let half = fractional_power(&op, 0.5, &x, alpha, &opts).unwrap();
        let twice = fractional_power(&op, 0.5, &half, alpha, &opts).unwrap();
        let tx = op.apply(&x).unwrap();
        let direct = WeightedVector::new(&x.entries - &tx.entries, x.space);
        let diff = WeightedVector::new(&twice.entries - &direct.entries, x.space).norm();
        assert!(diff <= 1e-7, "semigroup defect {diff}");
    }

    #[test]
    fn fractional_power_of_shift_is_fractional_difference() {
        // (I-T)^s on the shift equals the order-s forward difference
        let op = shift_op(0.6, 2048);
        let mut vals = vec![0.0; 2048];
        for (i, v) in vals.iter_mut().enumerate().take(24) {
            *v = 1.0 / (1.0 + i as f64);
        }
        let x = WeightedVector::from_slice(&vals, op.space());
        let s = 0.3;
        let y = fractional_power(&op, s, &x, 0.5, &SolveOptions::default()).unwrap();
        let f = crate::cesaro::CoeffSeq::new("x", vals.clone()).unwrap();
        let d = crate::fracdiff::d_alpha_window(&f, s, &TailModel::ZeroTail, 64).unwrap();
        for j in 0..64 {
            assert!(
                (y.entries[j] - d.seq.get(j)).abs() <= 1e-7,
                "j={j}: {} vs {}",
                y.entries[j],
                d.seq.get(j)
            );
        }
    }

    #[test]
    fn poisson_round_trip_on_shift() {
        let op = shift_op(0.6, 4096);
        let (alpha, s) = (0.5, 0.3);
        // w finitely supported
        let mut wv = vec![0.0; 4096];
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for slot in wv.iter_mut().take(24) {
            *slot = rng.sample::<f64, _>(StandardNormal);
        }
        let w = WeightedVector::from_slice(&wv, op.space());
        let x = fractional_power(&op, s, &w, alpha, &SolveOptions::default()).unwrap();
        let rep = poisson_solve_cesaro(&op, alpha, s, &x, &SolveOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Converged, "{:?}", rep.warning);
        let diff = WeightedVector::new(&rep.value.entries - &w.entries, w.space).norm();
        assert!(diff <= 1e-6 * w.norm(), "recovery error {diff}");

        // Taylor route agrees
        let rep_t = poisson_solve_taylor(&op, s, &x, alpha, &SolveOptions::default()).unwrap();
        assert!(rep_t.warning.is_none()); // alpha = 0.5 < 1 - s = 0.7: supported regime
        let agree =
            WeightedVector::new(&rep.value.entries - &rep_t.value.entries, w.space).norm();
        assert!(agree <= 1e-6 * w.norm(), "route disagreement {agree}");
    }

    #[test]
    fn poisson_divergence_witness() {
        // constant-one profile points along the fixed direction of the shift
        let op = shift_op(0.6, 4096);
        let x = WeightedVector::from_slice(&vec![1.0; 4096], op.space());
        let opts = SolveOptions {
            n_max: 1024, // keep the window inside the truncation
            ..SolveOptions::default()
        };
        let rep = poisson_solve_cesaro(&op, 0.5, 0.3, &x, &opts).unwrap();
        assert_ne!(rep.verdict, Verdict::Converged);
    }

    #[test]
    fn log_on_zero_operator_vanishes() {
        let op = zero_op(4);
        let x = op.random_probe(6);
        for alpha in [0.4, 1.0, 2.2] {
            let rep = log_operator(&op, alpha, &x, &SolveOptions::default()).unwrap();
            let norm = rep.value.norm();
            assert!(norm <= 1e-8 * x.norm(), "alpha={alpha}: {norm}");
        }
        // Taylor route: T^n = 0 for n >= 1
        let rep = log_operator_taylor(&op, &x, 0.5, &SolveOptions::default()).unwrap();
        assert!(rep.value.norm() == 0.0);
    }

    #[test]
    fn log_routes_agree_and_match_eigen_oracle() {
        let (op, v, d, vinv) = contraction_with_oracle(6, 31);
        let x = op.random_probe(12);
        let opts = SolveOptions::default();
        let rep_c = log_operator(&op, 0.5, &x, &opts).unwrap();
        let rep_t = log_operator_taylor(&op, &x, 0.5, &opts).unwrap();
        let agree =
            WeightedVector::new(&rep_c.value.entries - &rep_t.value.entries, x.space).norm();
        assert!(agree <= 1e-6 * x.norm(), "route disagreement {agree}");

        // eigen-route oracle: log(I-T) = V log(I-D) V^-1
        let logd = DMatrix::from_diagonal(&d.map(|l| (1.0 - l).ln()));
        let oracle = &v * logd * &vinv * &x.entries;
        let diff = (&rep_c.value.entries - &oracle).norm();
        assert!(diff <= 1e-8 * x.norm().max(1.0), "eigen defect {diff}");
    }

    #[test]
    fn hilbert_is_negated_logarithm() {
        let (op, _, _, _) = contraction_with_oracle(5, 41);
        let x = op.random_probe(2);
        let opts = SolveOptions::default();
        let alpha = 0.8;
        let log_rep = log_operator(&op, alpha, &x, &opts).unwrap();
        let hil_rep = hilbert_transform_alpha(&op, alpha, &x, &opts).unwrap();
        let sum =
            WeightedVector::new(&log_rep.value.entries + &hil_rep.value.entries, x.space)
                .norm();
        assert!(sum <= 1e-10 * x.norm().max(1.0), "negation defect {sum}");
    }

    #[test]
    fn hilbert_approaches_classical_sum_at_small_order() {
        let (op, _, _, _) = contraction_with_oracle(5, 43);
        let x = op.random_probe(3);
        let rep =
            hilbert_transform_alpha(&op, 0.05, &x, &SolveOptions::default()).unwrap();
        // classical transform: sum T^n x / n
        let pass = power_series_pass(
            &op,
            &x,
            &|n| if n == 0 { 0.0 } else { 1.0 / n as f64 },
            8192,
        )
        .unwrap();
        let classical = pass.partials.last().unwrap();
        let diff = (&rep.value.entries - classical).norm();
        assert!(diff <= 1e-3 * x.norm().max(1.0), "{diff}");
    }

    #[test]
    fn generator_derivative_matches_logarithm() {
        let (op, _, _, _) = contraction_with_oracle(6, 53);
        let x = op.random_probe(9);
        let opts = SolveOptions::default();
        let alpha = 0.6;
        let logx = log_operator(&op, alpha, &x, &opts).unwrap().value;
        let mut errs = Vec::new();
        for h in [0.1, 0.05, 0.025] {
            let pow = fractional_power(&op, h, &x, alpha, &opts).unwrap();
            let fd = WeightedVector::new(
                (&pow.entries - &x.entries) / h - &logx.entries,
                x.space,
            );
            errs.push(fd.norm());
        }
        // first-order convergence: log-log slope of the error in h near 1
        let slope = ((errs[0] / errs[2]).ln()) / ((0.1f64 / 0.025).ln());
        assert!(
            (0.9..=1.1).contains(&slope),
            "derivative order {slope}, errors {errs:?}"
        );
    }

    #[test]
    fn rate_trajectories_decay() {
        let op = shift_op(0.6, 8192);
        let (alpha, s) = (0.5, 0.3);
        let mut wv = vec![0.0; 8192];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for slot in wv.iter_mut().take(16) {
            *slot = rng.sample::<f64, _>(StandardNormal);
        }
        let w = WeightedVector::from_slice(&wv, op.space());
        let x = fractional_power(&op, s, &w, alpha, &SolveOptions::default()).unwrap();
        let ns = [64usize, 128, 256, 512, 1024, 2048];
        let rep = rate_check(&op, alpha, s, &x, &ns, RateVariant::CesaroMean).unwrap();
        assert!(rep.decreasing, "{rep:?}");
        assert!(rep.final_over_initial < 0.25, "{rep:?}");

        let rep = rate_check(&op, 0.2, 0.5, &x, &ns, RateVariant::PowerMean).unwrap();
        assert!(rep.final_over_initial < 0.25, "{rep:?}");
    }

    #[test]
    fn domain_verdict_matches_eigen_criterion() {
        // matrices with an eigenvalue-1 direction: the domain series
        // converges exactly when x has no component along it
        let dim = 5;
        for seed in 0..20u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let raw = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
            let v = raw.qr().q();
            let mut d = DVector::from_fn(dim, |i, _| 0.7 * ((i as f64 + 1.0) / dim as f64) - 0.4);
            d[0] = 1.0; // fixed direction
            let vinv = v.clone().try_inverse().unwrap();
            let t = &v * DMatrix::from_diagonal(&d) * &vinv;
            let op = LinOp::dense(t).unwrap();

            let with_component = seed % 2 == 0;
            let mut coeffs = DVector::from_fn(dim, |i, _| {
                if i == 0 {
                    0.0
                } else {
                    rng.sample::<f64, _>(StandardNormal)
                }
            });
            if with_component {
                coeffs[0] = 1.0 + rng.sample::<f64, _>(StandardNormal).abs();
            }
            let x = WeightedVector::new(&v * coeffs, op.space());
            let opts = SolveOptions {
                n_max: 4096,
                ..SolveOptions::default()
            };
            let rep = poisson_solve_cesaro(&op, 0.4, 0.5, &x, &opts).unwrap();
            if with_component {
                assert_ne!(
                    rep.verdict,
                    Verdict::Converged,
                    "seed {seed}: fixed component must block convergence"
                );
            } else {
                assert_eq!(
                    rep.verdict,
                    Verdict::Converged,
                    "seed {seed}: {:?}",
                    rep.warning
                );
            }
        }
    }

    #[test]
    fn range_density_consequence() {
        // x = (I-T) w is reproduced by the explicit range construction
        // sum_n W^a k^-s(n) Delta_(a+1)(n-1) (T - I) x
        let (op, _, _, _) = contraction_with_oracle(6, 61);
        let xw = op.random_probe(14);
        let tx = op.apply(&xw).unwrap();
        let x = WeightedVector::new(&xw.entries - &tx.entries, xw.space);
        let s = 0.5;
        let alpha = 0.4;
        let opts = SolveOptions::default();
        // forward image y = (I-T)^s x
        let y = fractional_power(&op, s, &x, alpha, &opts).unwrap();
        // reconstruct y from the shifted series (range identity route)
        let cs = fractional_power_coeffs(s, alpha, opts.n_max).unwrap();
        let t_minus_i = {
            let tx = op.apply(&x).unwrap();
            WeightedVector::new(&tx.entries - &x.entries, x.space)
        };
        let pass =
            cesaro_series_pass(&op, &t_minus_i, alpha + 1.0, &|n| cs[n + 1], opts.n_max - 1)
                .unwrap();
        // coefficients are the fractional-power ones (exponent -s-a-1),
        // shifted by one index
        let rep = analyze_pass(&pass, -s - alpha - 1.0, Some(alpha), x.norm(), &opts);
        // the n = 0 term is absorbed: the boundary identity makes
        // sum_{n>=1} W^a k^-s(n) k^(a+1)(n) = -W^a k^-s(0)
        let diff = WeightedVector::new(&rep.value.entries - &y.entries, x.space).norm();
        assert!(diff <= 1e-5 * x.norm().max(1.0), "{diff}");
    }
}
