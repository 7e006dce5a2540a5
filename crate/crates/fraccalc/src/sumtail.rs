//! Internal summation toolkit: power-law tail fits, Euler-Maclaurin style
//! tail corrections for sums against Cesàro weights, and Richardson
//! extrapolation of checkpointed partial sums.
//!
//! Every series in this library is a truncation of something infinite. The
//! helpers here turn "we stopped at N" into a correction plus an error bound,
//! under an explicit power-law model of the neglected terms.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special;

/// Least-squares fit of `ln |v|` against `ln n`. Returns (slope, intercept,
/// max absolute log-residual). Entries with `v == 0` are skipped.
pub(crate) fn fit_log_slope(ns: &[f64], vals: &[f64]) -> Option<(f64, f64, f64)> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(vals)
        .filter(|(&n, &v)| n > 0.0 && v != 0.0 && v.is_finite())
        .map(|(&n, &v)| (n.ln(), v.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let slope = (m * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / m;
    let max_resid = pts
        .iter()
        .map(|&(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Some((slope, intercept, max_resid))
}

/// `sum_{i >= i0} i^q` for q < -1, by the midpoint-rule integral
/// `int_{i0 - 1/2}^inf x^q dx`. The midpoint rule makes the defect
/// `O(q^2 i0^(q-1))`, negligible at the i0 used here.
pub(crate) fn power_sum_from(i0: f64, q: f64) -> f64 {
    debug_assert!(q < -1.0);
    let a = i0 - 0.5;
    a.powf(q + 1.0) / (-q - 1.0)
}

/// Tail sum `sum_{i >= i0} k^kappa(i) * coeff * (i + offset)^p`.
///
/// Exact terms are accumulated over a block of ~2^20 indices starting at the
/// (possibly large) `i0`, with `k^kappa(i0)` seeded from log-Gamma ratios;
/// the remainder beyond the block is integrated under the two-term
/// asymptotics of `k^kappa`. Returns `(value, error_bound)`.
///
/// Requires `kappa + p < 0`, otherwise the modelled tail diverges.
pub(crate) fn k_weighted_power_tail(
    kappa: f64,
    i0: usize,
    offset: f64,
    coeff: f64,
    p: f64,
) -> Result<(f64, f64)> {
    if coeff == 0.0 {
        return Ok((0.0, 0.0));
    }
    // Non-positive integer kappa: the weight row is identically zero from
    // index -kappa + 1 on, so the tail terminates.
    if kappa <= 0.0 && kappa == kappa.floor() {
        let last = (-kappa) as usize;
        if i0 > last {
            return Ok((0.0, 0.0));
        }
        let row = crate::cesaro::k_row(kappa, last);
        let mut acc = 0.0;
        for (i, kv) in row.iter().enumerate().skip(i0) {
            acc += kv * coeff * (i as f64 + offset).powf(p);
        }
        return Ok((acc, acc.abs() * 1e-14));
    }
    if kappa + p >= 0.0 {
        return Err(Error::DivergentTail(format!(
            "tail model with exponent p = {p} diverges against weight order {kappa} \
             (requires kappa + p < 0)"
        )));
    }

    // Seed k^kappa(i0) in log space: k^kappa(i) = G(i+kappa)/(G(kappa) G(i+1)).
    let seed = |i: f64| -> Result<f64> {
        if i == 0.0 {
            return Ok(1.0);
        }
        let g_kappa = special::gamma_signed(kappa)?;
        let lg = special::log_gamma(i + kappa)? - special::log_gamma(i + 1.0)?;
        Ok(lg.exp() / g_kappa)
    };

    // Exact terms are only needed until the two-term asymptotics of k^kappa
    // hold; from index ~8e3 their relative defect is already below 1e-7 of
    // the (small) remainder, so deep starts take a short block.
    let end = if i0 >= 8192 {
        i0 + 1024
    } else {
        (i0 + 1024).max(32_768)
    };
    let mut k = seed(i0 as f64)?;
    let mut acc = 0.0;
    let mut i = i0;
    while i < end {
        let t = k * coeff * (i as f64 + offset).powf(p);
        acc += t;
        let nf = (i + 1) as f64;
        k *= (nf + kappa - 1.0) / nf;
        i += 1;
    }

    // Remainder under the two-term asymptotics
    // k^kappa(x) ~ x^(kappa-1)/G(kappa) (1 + kappa(kappa-1)/(2x)),
    // replacing the sum by the midpoint integral from end - 1/2. The kernel
    // x^(kappa-1)(x+offset)^p is integrated numerically over ten geometric
    // octaves (offset/x need not be small there), then in closed form with
    // the offset folded into the power integral once it is negligible.
    let g_kappa = special::gamma_signed(kappa)?;
    let kc = kappa * (kappa - 1.0) / 2.0;
    let kernel = |x: f64| x.powf(kappa - 1.0) * (1.0 + kc / x) * (x + offset).powf(p);
    let a = end as f64 - 0.5;
    let far = a * 1024.0;
    // composite Simpson in log space, 16 panels per octave
    let mut integral = 0.0;
    let (ya, yb) = (a.ln(), far.ln());
    let panels = 160;
    let h = (yb - ya) / panels as f64;
    let gy = |y: f64| {
        let x = y.exp();
        kernel(x) * x
    };
    for i in 0..panels {
        let y0 = ya + i as f64 * h;
        integral += h / 6.0 * (gy(y0) + 4.0 * gy(y0 + 0.5 * h) + gy(y0 + h));
    }
    // closed-form far tail: (x+offset)^p ~ x^p (1 + p offset/x)
    let q = kappa - 1.0 + p;
    let far_tail = far.powf(q + 1.0) / (-q - 1.0)
        + (kc + p * offset) * if q < 0.0 { far.powf(q) / (-q) } else { 0.0 };
    let rem = coeff / g_kappa * (integral + far_tail);
    // Error budget: third asymptotic order of the weight over [a, inf),
    // second-order offset expansion past the switch point, round-off.
    let err = rem.abs() * ((1.0 + kappa * kappa).powi(2) / (a * a) + 1e-12)
        + (coeff / g_kappa * far_tail).abs() * (p * offset / far).powi(2)
        + acc.abs() * 1e-15 * ((end - i0) as f64).sqrt();
    Ok((acc + rem, err.abs()))
}

/// Tail information attached to a truncated scalar series.
#[derive(Debug, Clone, Default)]
pub(crate) struct TailFit {
    /// Correction to add to the partial sum.
    pub correction: f64,
    /// Bound on the error of the corrected sum.
    pub bound: f64,
    /// True when the model describes a convergent tail.
    pub convergent: bool,
}

/// Model the tail of a scalar series from its computed terms `a_n`,
/// n = 0..=N. When `exact_q` is supplied the term model is
/// `a_n = n^q (A + B/n)` with A, B fitted linearly over the last window;
/// otherwise the exponent itself is fitted log-log.
pub(crate) fn scalar_series_tail(terms: &[f64], exact_q: Option<f64>) -> TailFit {
    let n_max = terms.len() - 1;
    if n_max < 16 {
        return TailFit {
            correction: 0.0,
            bound: terms.iter().map(|t| t.abs()).fold(0.0, f64::max) * 1e-15,
            convergent: true,
        };
    }
    let lo = n_max / 2;
    let ns: Vec<f64> = (lo..=n_max).map(|n| n as f64).collect();
    let vals: Vec<f64> = terms[lo..=n_max].to_vec();

    let q = match exact_q {
        Some(q) => q,
        None => match fit_log_slope(&ns, &vals) {
            Some((slope, _, _)) => slope,
            None => {
                // all-zero tail window: nothing to correct
                return TailFit {
                    correction: 0.0,
                    bound: 0.0,
                    convergent: true,
                };
            }
        },
    };

    if q >= -1.0 {
        return TailFit {
            correction: 0.0,
            bound: f64::INFINITY,
            convergent: false,
        };
    }

    // Linear fit of a_n n^-q = A + B/n over the window.
    let mut s11 = 0.0;
    let mut s1x = 0.0;
    let mut sxx = 0.0;
    let mut s1y = 0.0;
    let mut sxy = 0.0;
    for (&n, &v) in ns.iter().zip(&vals) {
        let x = 1.0 / n;
        let y = v * n.powf(-q);
        s11 += 1.0;
        s1x += x;
        sxx += x * x;
        s1y += y;
        sxy += x * y;
    }
    let denom = s11 * sxx - s1x * s1x;
    let (a_amp, b_amp) = if denom.abs() > 1e-300 {
        let b = (s11 * sxy - s1x * s1y) / denom;
        let a = (s1y - b * s1x) / s11;
        (a, b)
    } else {
        (s1y / s11, 0.0)
    };
    // residual of the two-term model over the window
    let resid = ns
        .iter()
        .zip(&vals)
        .map(|(&n, &v)| (v * n.powf(-q) - a_amp - b_amp / n).abs())
        .fold(0.0, f64::max);

    let start = (n_max + 1) as f64;
    let lead = a_amp * power_sum_from(start, q);
    let next = if q - 1.0 < -1.0 {
        b_amp * power_sum_from(start, q - 1.0)
    } else {
        0.0
    };
    let correction = lead + next;
    // The unmodelled part is bounded by the window residual propagated
    // through the same power sum, plus the midpoint-rule defect of the
    // integral replacement (O(q^2/start^2) of the leading term).
    let bound = resid * power_sum_from(start, q)
        + lead.abs() * (q * (q - 1.0)).abs() / (8.0 * start * start)
        + correction.abs() * 1e-12;
    TailFit {
        correction,
        bound,
        convergent: true,
    }
}

/// Two-term amplitude fit over the last half of a window:
/// `vals[n] ~ A n^q + B n^(q-1)` with `q` imposed (or fitted log-log).
/// Returns `(q, A, B)`.
pub(crate) fn fit_two_term(vals: &[f64], exact_q: Option<f64>) -> Option<(f64, f64, f64)> {
    let n_max = vals.len() - 1;
    if n_max < 32 {
        return None;
    }
    let lo = n_max / 2;
    let q = match exact_q {
        Some(q) => q,
        None => {
            let ns: Vec<f64> = (lo..=n_max).map(|n| n as f64).collect();
            fit_log_slope(&ns, &vals[lo..=n_max]).map(|(s, _, _)| s)?
        }
    };
    let mut s11 = 0.0;
    let mut s1x = 0.0;
    let mut sxx = 0.0;
    let mut s1y = 0.0;
    let mut sxy = 0.0;
    for n in lo..=n_max {
        let nf = n as f64;
        let x = 1.0 / nf;
        let y = vals[n] * nf.powf(-q);
        s11 += 1.0;
        s1x += x;
        sxx += x * x;
        s1y += y;
        sxy += x * y;
    }
    let denom = s11 * sxx - s1x * s1x;
    if denom.abs() < 1e-300 {
        return Some((q, s1y / s11, 0.0));
    }
    let b = (s11 * sxy - s1x * s1y) / denom;
    let a = (s1y - b * s1x) / s11;
    Some((q, a, b))
}

/// Linear-combination support for Richardson extrapolation over the value
/// types the series engines produce.
pub(crate) trait Extrapolable: Clone {
    fn combine(a: &Self, ca: f64, b: &Self, cb: f64) -> Self;
    fn dist(a: &Self, b: &Self) -> f64;
}

impl Extrapolable for f64 {
    fn combine(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        ca * a + cb * b
    }
    fn dist(a: &Self, b: &Self) -> f64 {
        (a - b).abs()
    }
}

impl Extrapolable for Complex64 {
    fn combine(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        ca * a + cb * b
    }
    fn dist(a: &Self, b: &Self) -> f64 {
        (a - b).norm()
    }
}

impl Extrapolable for DVector<f64> {
    fn combine(a: &Self, ca: f64, b: &Self, cb: f64) -> Self {
        a * ca + b * cb
    }
    fn dist(a: &Self, b: &Self) -> f64 {
        (a - b).norm()
    }
}

/// One Richardson stage: given partial sums S(N) and S(2N) of a series whose
/// tail behaves like `A N^p` (p < 0), return the extrapolated limit.
pub(crate) fn richardson_step<V: Extrapolable>(s_n: &V, s_2n: &V, p: f64) -> V {
    let w = 2f64.powf(p) / (1.0 - 2f64.powf(p));
    // S_inf = S(2N) + (S(2N) - S(N)) * w
    V::combine(s_2n, 1.0 + w, s_n, -w)
}

/// Three-stage ladder on partial sums at N/8, N/4, N/2, N (exponents p,
/// p-1, p-2).
pub(crate) fn richardson_ladder4<V: Extrapolable>(
    s: [&V; 4],
    p: f64,
) -> (V, f64) {
    let e1 = richardson_step(s[0], s[1], p);
    let e2 = richardson_step(s[1], s[2], p);
    let e3 = richardson_step(s[2], s[3], p);
    let f1 = richardson_step(&e1, &e2, p - 1.0);
    let f2 = richardson_step(&e2, &e3, p - 1.0);
    let out = richardson_step(&f1, &f2, p - 2.0);
    let unc = V::dist(&out, &f2).max(V::dist(&f2, &f1) * 0.25);
    (out, unc)
}

/// Regress partial sums against `ln n` to detect harmonic-type divergence:
/// returns the growth coefficient `c` in `S(n) ~ c ln n + d` and the maximum
/// absolute residual of the fit.
pub(crate) fn log_growth_coefficient(ns: &[f64], partials: &[f64]) -> Option<(f64, f64)> {
    if ns.len() < 4 {
        return None;
    }
    let m = ns.len() as f64;
    let xs: Vec<f64> = ns.iter().map(|&n| n.ln()).collect();
    let sx: f64 = xs.iter().sum();
    let sy: f64 = partials.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(partials).map(|(x, y)| x * y).sum();
    let denom = m * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    let c = (m * sxy - sx * sy) / denom;
    let d = (sy - c * sx) / m;
    let resid = xs
        .iter()
        .zip(partials)
        .map(|(x, y)| (y - c * x - d).abs())
        .fold(0.0, f64::max);
    Some((c, resid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_recover_pure_power() {
        let ns: Vec<f64> = (50..100).map(|n| n as f64).collect();
        let vals: Vec<f64> = ns.iter().map(|n| 3.0 * n.powf(-1.7)).collect();
        let (slope, _, resid) = fit_log_slope(&ns, &vals).unwrap();
        assert!((slope + 1.7).abs() < 1e-10);
        assert!(resid < 1e-10);
    }

    #[test]
    fn scalar_tail_matches_zeta_like_sum() {
        // sum_{n>=1} n^-3 = zeta(3); truncate at 400 and correct.
        let zeta3 = 1.202_056_903_159_594_2;
        let terms: Vec<f64> = (0..=400)
            .map(|n| if n == 0 { 0.0 } else { (n as f64).powf(-3.0) })
            .collect();
        let partial: f64 = terms.iter().sum();
        let fit = scalar_series_tail(&terms, Some(-3.0));
        assert!(fit.convergent);
        let corrected = partial + fit.correction;
        assert!(
            (corrected - zeta3).abs() <= fit.bound.max(1e-12),
            "corrected {corrected} vs {zeta3}, bound {}",
            fit.bound
        );
        assert!((corrected - zeta3).abs() < 1e-11);
    }

    #[test]
    fn scalar_tail_flags_divergence() {
        let terms: Vec<f64> = (0..=300).map(|n| ((n + 1) as f64).powf(-0.5)).collect();
        let fit = scalar_series_tail(&terms, None);
        assert!(!fit.convergent);
    }

    #[test]
    fn k_weighted_tail_against_brute_force() {
        // sum_{i>=i0} k^-0.7(i) * 2.0 * (i+5)^-1.1, brute forced far past
        // convergence.
        let kappa = -0.7;
        let (val, err) = k_weighted_power_tail(kappa, 100, 5.0, 2.0, -1.1).unwrap();
        let row = crate::cesaro::k_row(kappa, 40_000_000);
        let mut brute = 0.0;
        for (i, kv) in row.iter().enumerate().skip(100) {
            brute += kv * 2.0 * (i as f64 + 5.0).powf(-1.1);
        }
        // brute force itself is truncated; allow its own tail scale
        assert!(
            (val - brute).abs() <= err + 1e-8,
            "tail {val} vs brute {brute} (err bound {err})"
        );
    }

    #[test]
    fn k_weighted_tail_divergence_detected() {
        assert!(k_weighted_power_tail(0.5, 10, 0.0, 1.0, -0.2).is_err());
    }

    #[test]
    fn richardson_kills_power_tails() {
        // S(N) = 1 - N^-0.7 (1 + 1/N)
        let s = |n: f64| 1.0 - n.powf(-0.7) * (1.0 + 1.0 / n);
        let (v, unc) =
            richardson_ladder4([&s(500.0), &s(1000.0), &s(2000.0), &s(4000.0)], -0.7);
        assert!((v - 1.0).abs() < 1e-9, "extrapolated {v}");
        assert!((v - 1.0).abs() <= unc * 10.0 + 1e-12);
    }

    #[test]
    fn log_growth_detected() {
        let ns: Vec<f64> = (4..40).map(|k| (k * k) as f64).collect();
        let partials: Vec<f64> = ns.iter().map(|n| 2.5 * n.ln() + 0.3).collect();
        let (c, resid) = log_growth_coefficient(&ns, &partials).unwrap();
        assert!((c - 2.5).abs() < 1e-9);
        assert!(resid < 1e-9);
    }
}
