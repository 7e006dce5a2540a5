//! Weyl sums `W^-a`, Weyl differences `W^a` and the forward fractional
//! difference `D^a` on truncated sequences.
//!
//! All three operators look forward: entry `n` of the output sums the input
//! over `j >= n`. A truncated input therefore forces a policy for the unseen
//! tail, the [`TailModel`]. `zero_tail` declares the input exactly supported
//! on the truncation; `power_tail(p, C)` models `f(j) ~ C j^p` beyond it and
//! adds the corresponding correction term, computed by summing against the
//! exact weight recurrence with an integral cutoff.
//!
//! Outputs carry per-entry tail-error estimates and a reliable prefix
//! length; indices too close to the truncation (within `m + ceil(a)`) are
//! never trusted.

use serde::{Deserialize, Serialize};

use crate::cesaro::{k_row, CoeffSeq};
use crate::error::{Error, Result};
use crate::sumtail;

/// Assumed behavior of `f(n)` beyond the stored truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailModel {
    /// The sequence is exactly zero past the truncation.
    ZeroTail,
    /// `f(n) ~ coefficient * (n + shift)^exponent` past the truncation.
    ///
    /// The shift buys a second asymptotic order for free on the sequences
    /// used here: `1/(n+1)` is exact at shift 1, and the binomial row `k^s`
    /// matches `(n + s/2)^(s-1)/Gamma(s)` to `O(n^(s-3))`.
    PowerTail {
        exponent: f64,
        coefficient: f64,
        #[serde(default)]
        shift: f64,
    },
}

impl TailModel {
    pub fn zero() -> Self {
        TailModel::ZeroTail
    }

    pub fn power(exponent: f64, coefficient: f64) -> Self {
        TailModel::PowerTail {
            exponent,
            coefficient,
            shift: 0.0,
        }
    }

    pub fn power_shifted(exponent: f64, coefficient: f64, shift: f64) -> Self {
        TailModel::PowerTail {
            exponent,
            coefficient,
            shift,
        }
    }

    /// Tail of `sum_{j > trunc} k^kappa(j - n) f(j)` under this model, as
    /// `(correction, error_bound)`.
    fn weighted_tail(&self, kappa: f64, trunc: usize, n: usize) -> Result<(f64, f64)> {
        match *self {
            TailModel::ZeroTail => Ok((0.0, 0.0)),
            TailModel::PowerTail {
                exponent,
                coefficient,
                shift,
            } => sumtail::k_weighted_power_tail(
                kappa,
                trunc + 1 - n,
                n as f64 + shift,
                coefficient,
                exponent,
            ),
        }
    }
}

/// Result of a fractional-difference operation: the output truncation, a
/// per-entry bound for the neglected-tail error, and the length of the
/// prefix the operation considers trustworthy.
#[derive(Debug, Clone)]
pub struct DiffOutput {
    pub seq: CoeffSeq,
    pub tail_err: Vec<f64>,
    pub reliable_len: usize,
}

impl DiffOutput {
    pub fn reliable_values(&self) -> &[f64] {
        &self.seq.values()[..self.reliable_len]
    }
}

/// Relative tail-error level beyond which an entry is flagged unreliable.
pub const RELIABILITY_REL_TOL: f64 = 1e-9;

/// Power-law tail fitted from the last half of a computed window; falls
/// back to `ZeroTail` when no clean single-sign power behavior is visible.
pub fn fitted_tail_model(values: &[f64]) -> TailModel {
    let lo = values.len() / 2;
    let ns: Vec<f64> = (lo..values.len()).map(|n| n as f64).collect();
    match sumtail::fit_log_slope(&ns, &values[lo..]) {
        Some((slope, intercept, resid)) if resid < 0.2 && slope < -0.5 => {
            let sign = if values[values.len() - 1] >= 0.0 {
                1.0
            } else {
                -1.0
            };
            TailModel::power(slope, sign * intercept.exp())
        }
        _ => TailModel::ZeroTail,
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "fractional order must be positive and finite, got {alpha}"
        )));
    }
    Ok(())
}

/// Integer difference order for the Weyl difference: `m = floor(alpha) + 1`,
/// also for integer `alpha`.
pub fn weyl_integer_order(alpha: f64) -> usize {
    alpha.floor() as usize + 1
}

fn binomials(m: usize) -> Vec<f64> {
    let mut c = vec![1.0; m + 1];
    for j in 1..=m {
        c[j] = c[j - 1] * (m - j + 1) as f64 / j as f64;
    }
    c
}

/// `W^m f(n) = sum_{j=0}^m (-1)^j C(m,j) f(n+j)` for all n with n+m in range.
pub fn integer_diff(f: &[f64], m: usize) -> Vec<f64> {
    if f.len() <= m {
        return Vec::new();
    }
    let c = binomials(m);
    (0..f.len() - m)
        .map(|n| {
            let mut acc = 0.0;
            for (j, &cj) in c.iter().enumerate() {
                let term = cj * f[n + j];
                acc += if j % 2 == 0 { term } else { -term };
            }
            acc
        })
        .collect()
}

/// Core weighted forward sum: `out(n) = sum_{j>=n} k^kappa(j-n) f(j)` with
/// the tail handled by the model. Entries `0..n_out`.
fn forward_weighted(
    f: &[f64],
    kappa: f64,
    tail: &TailModel,
    n_out: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let trunc = f.len() - 1;
    let n_out = n_out.min(f.len());
    let weights = k_row(kappa, trunc);
    let mut out = Vec::with_capacity(n_out);
    let mut errs = Vec::with_capacity(n_out);
    for n in 0..n_out {
        let mut acc = 0.0;
        for (i, &w) in weights[..=trunc - n].iter().enumerate() {
            acc += w * f[n + i];
        }
        let (corr, err) = tail.weighted_tail(kappa, trunc, n)?;
        out.push(acc + corr);
        errs.push(err);
    }
    Ok((out, errs))
}

fn reliability_prefix(values: &[f64], errs: &[f64], margin: usize) -> usize {
    let hard = values.len().saturating_sub(margin);
    let scale = values
        .iter()
        .take(hard)
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-300);
    let mut len = hard;
    for (i, &e) in errs.iter().take(hard).enumerate() {
        if e > RELIABILITY_REL_TOL * scale {
            len = i;
            break;
        }
    }
    len
}

/// Weyl sum `W^-alpha f(n) = sum_{j>=n} k^alpha(j-n) f(j)`, alpha > 0.
pub fn weyl_sum(f: &CoeffSeq, alpha: f64, tail: &TailModel) -> Result<DiffOutput> {
    weyl_sum_window(f, alpha, tail, f.len())
}

/// Windowed Weyl sum: only entries `0..n_out` are produced (each entry costs
/// a pass over the input, so keep the window no larger than needed).
pub fn weyl_sum_window(
    f: &CoeffSeq,
    alpha: f64,
    tail: &TailModel,
    n_out: usize,
) -> Result<DiffOutput> {
    check_alpha(alpha)?;
    let (out, errs) = forward_weighted(f.values(), alpha, tail, n_out)?;
    let margin = alpha.ceil() as usize;
    let reliable_len = reliability_prefix(&out, &errs, margin);
    Ok(DiffOutput {
        seq: CoeffSeq::new(format!("W^-{alpha}[{}]", f.label()), out)?,
        tail_err: errs,
        reliable_len,
    })
}

/// Forward fractional difference `D^alpha f(n) = sum_{j>=n} k^-alpha(j-n) f(j)`.
///
/// Converges for bounded `f` already (the weights are absolutely summable),
/// so it succeeds on inputs where the Weyl difference is undefined.
pub fn d_alpha(f: &CoeffSeq, alpha: f64, tail: &TailModel) -> Result<DiffOutput> {
    d_alpha_window(f, alpha, tail, f.len())
}

pub fn d_alpha_window(
    f: &CoeffSeq,
    alpha: f64,
    tail: &TailModel,
    n_out: usize,
) -> Result<DiffOutput> {
    check_alpha(alpha)?;
    let (out, errs) = forward_weighted(f.values(), -alpha, tail, n_out)?;
    let margin = alpha.ceil() as usize;
    let reliable_len = reliability_prefix(&out, &errs, margin);
    Ok(DiffOutput {
        seq: CoeffSeq::new(format!("D^{alpha}[{}]", f.label()), out)?,
        tail_err: errs,
        reliable_len,
    })
}

/// Weyl difference `W^alpha f = W^m W^-(m-alpha) f` with `m = floor(alpha)+1`.
///
/// The output is structurally shorter than the input by `m` (the integer
/// difference needs entries past each index).
pub fn weyl_diff(f: &CoeffSeq, alpha: f64, tail: &TailModel) -> Result<DiffOutput> {
    weyl_diff_window(f, alpha, tail, f.len())
}

pub fn weyl_diff_window(
    f: &CoeffSeq,
    alpha: f64,
    tail: &TailModel,
    n_out: usize,
) -> Result<DiffOutput> {
    check_alpha(alpha)?;
    let m = weyl_integer_order(alpha);
    if f.len() <= m {
        return Err(Error::InvalidInput(format!(
            "input length {} too short for integer difference order {m}",
            f.len()
        )));
    }
    let sigma = m as f64 - alpha; // in (0, 1]
    let inner_out = (n_out + m).min(f.len());
    let (inner, inner_errs) = forward_weighted(f.values(), sigma, tail, inner_out)?;
    let out = integer_diff(&inner, m);
    let c = binomials(m);
    let errs: Vec<f64> = (0..out.len())
        .map(|n| (0..=m).map(|j| c[j] * inner_errs[n + j]).sum())
        .collect();
    let margin = m + alpha.ceil() as usize;
    let reliable_len = reliability_prefix(&out, &errs, margin.min(out.len()));
    Ok(DiffOutput {
        seq: CoeffSeq::new(format!("W^{alpha}[{}]", f.label()), out)?,
        tail_err: errs,
        reliable_len,
    })
}

/// Max-norm residual of the left-inverse law `D^alpha (W^-alpha f) = f` over
/// the mutually reliable window. The input is treated as exactly supported
/// on its truncation.
pub fn inversion_residual(f: &CoeffSeq, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let zero = TailModel::ZeroTail;
    let w = weyl_sum(f, alpha, &zero)?;
    let d = d_alpha(&w.seq, alpha, &zero)?;
    let window = d
        .seq
        .len()
        .min(f.len())
        .saturating_sub(2 * alpha.ceil() as usize + 2);
    if window == 0 {
        return Err(Error::InvalidInput(
            "sequence too short for a meaningful residual window".into(),
        ));
    }
    let mut worst = 0.0f64;
    for n in 0..window {
        worst = worst.max((d.seq.get(n) - f.get(n)).abs());
    }
    Ok(worst)
}
