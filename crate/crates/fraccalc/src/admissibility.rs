//! Sign certificates for admissible functions and log-convex sequences.
//!
//! A function `f` with coefficient sequence `f(n)` is admissible at order
//! `a` when, for `b` in `{0, a}`: `f` is bounded, `D^b f >= 0`,
//! `W^-b(D^b f) = f`, and the reciprocal coefficients `g = 1/f` satisfy
//! `W^b g(0) >= 0`, `W^b g(n) <= 0` for `n >= 1`. Certification is over a
//! finite window plus tail model and never claims all-n validity; the
//! window and margins are part of the certificate.
//!
//! Floating-point sign checks need a dead zone: `sign_tol` is an absolute
//! band around zero. Quantities that are exactly zero count as boundary
//! cases (certificate stays positive but is flagged non-strict), which is
//! how degenerate members like the constant function certify.

use serde::Serialize;

use crate::algebra::{self, AnalyticFn, ClosedForm};
use crate::cesaro::{convolve_slices, k_row, CoeffSeq};
use crate::error::{Error, Result};
use crate::fracdiff::{self, TailModel};
use crate::sumtail;

#[derive(Debug, Clone, Copy)]
pub struct CertOptions {
    /// Absolute dead zone for sign checks.
    pub sign_tol: f64,
    /// Relative tolerance for the reconstruction residual.
    pub rec_tol: f64,
    /// Length of the reciprocal-coefficient row used behind the window.
    pub g_len: usize,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions {
            sign_tol: 1e-12,
            rec_tol: 1e-8,
            g_len: 8192,
        }
    }
}

/// Outcome of an admissibility certification.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityCertificate {
    pub alpha: f64,
    pub checked_up_to: usize,
    pub f_nonneg_ok: bool,
    pub f_dalpha_nonneg_ok: bool,
    pub reconstruction_ok: bool,
    pub g_sign_ok: bool,
    /// Smallest satisfaction margin among sign-checked quantities that are
    /// not exactly on the boundary.
    pub worst_margin: f64,
    /// Number of quantities sitting exactly on the boundary (zero).
    pub boundary_hits: usize,
    /// True when every sign check holds strictly beyond `sign_tol`.
    pub strict: bool,
    pub sign_tol: f64,
}

impl AdmissibilityCertificate {
    pub fn positive(&self) -> bool {
        self.f_nonneg_ok
            && self.f_dalpha_nonneg_ok
            && self.reconstruction_ok
            && self.g_sign_ok
            && self.worst_margin > self.sign_tol
    }
}

/// Tracks sign margins: `record(v)` where `v >= 0` means satisfied by `v`.
struct MarginTracker {
    worst: f64,
    boundary: usize,
    ok: bool,
    tol: f64,
}

impl MarginTracker {
    fn new(tol: f64) -> Self {
        MarginTracker {
            worst: f64::INFINITY,
            boundary: 0,
            ok: true,
            tol,
        }
    }

    fn record(&mut self, margin: f64) {
        if margin == 0.0 {
            self.boundary += 1;
            return;
        }
        if margin < -self.tol {
            self.ok = false;
        }
        self.worst = self.worst.min(margin);
    }
}

fn d_beta_window(f: &AnalyticFn, beta: f64, tail: &TailModel, n_out: usize) -> Result<Vec<f64>> {
    if beta == 0.0 {
        return Ok(f.coeffs().values()[..n_out.min(f.len())].to_vec());
    }
    let d = fracdiff::d_alpha_window(f.coeffs(), beta, tail, n_out)?;
    Ok(d.seq.values().to_vec())
}

/// Tail model of `D^b f` itself: Gamma-ratio asymptotics with the shift
/// that makes the power model second-order exact,
/// `G(j+a)/G(j+b) = (j + (a+b-1)/2)^(a-b) (1 + O(1/j^2))`.
fn difference_tail_model(f: &AnalyticFn, beta: f64, computed: &[f64]) -> Result<TailModel> {
    match f.form() {
        ClosedForm::KPower { s } if !(*s <= 0.0 && *s == s.floor()) => {
            let c = (std::f64::consts::PI * s).sin() / std::f64::consts::PI
                * crate::special::gamma_signed(1.0 - s + beta)?;
            Ok(TailModel::power_shifted(
                s - beta - 1.0,
                c,
                (s + beta) / 2.0,
            ))
        }
        ClosedForm::LogOverZ => Ok(TailModel::power_shifted(
            -beta - 1.0,
            crate::special::gamma_signed(beta + 1.0)?,
            (beta + 2.0) / 2.0,
        )),
        _ => Ok(fracdiff::fitted_tail_model(computed)),
    }
}

/// Certify admissibility of `f` at order `alpha` over `n <= n_check`.
pub fn check_admissible(
    f: &AnalyticFn,
    alpha: f64,
    n_check: usize,
    tail: &TailModel,
    opts: &CertOptions,
) -> Result<AdmissibilityCertificate> {
    if !(alpha >= 0.0) {
        return Err(Error::Domain("admissibility needs alpha >= 0".into()));
    }
    if f.coeffs().get(0) == 0.0 {
        return Err(Error::ZeroConstantTerm);
    }
    let vals = f.coeffs().values();
    let mut margins = MarginTracker::new(opts.sign_tol);

    // boundedness proxy: finite sup, second half not above the first
    let half = vals.len() / 2;
    let sup_head = vals[..half].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_tail = vals[half..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let bounded_ok = sup_tail <= sup_head * (1.0 + 1e-12) + opts.sign_tol;

    // f(n) >= 0 on the window (the b = 0 positivity condition)
    let mut f_nonneg = bounded_ok;
    for n in 0..=n_check.min(vals.len() - 1) {
        margins.record(vals[n]);
        if vals[n] < -opts.sign_tol {
            f_nonneg = false;
        }
    }

    // D^a f(n) >= 0 on the window
    let mut dalpha_nonneg = true;
    let mut reconstruction_ok = true;
    if alpha > 0.0 {
        let beta = alpha;
        let d = d_beta_window(f, beta, tail, n_check + 1)?;
        for &v in d.iter().take(n_check + 1) {
            margins.record(v);
            if v < -opts.sign_tol {
                dalpha_nonneg = false;
            }
        }

        // W^-b (D^b f) = f on the window: the fractional difference is
        // recomputed over a longer window so the outer Weyl sum sees enough
        // of it.
        let wide = (16 * n_check + 64).max(2048).min(f.len().saturating_sub(1));
        let d_wide = d_beta_window(f, beta, tail, wide)?;
        let d_seq = CoeffSeq::new("dbf", d_wide.clone())?;
        let d_tail = difference_tail_model(f, beta, &d_wide)?;
        let w = fracdiff::weyl_sum_window(&d_seq, beta, &d_tail, n_check + 1)?;
        let scale = vals
            .iter()
            .take(n_check + 1)
            .fold(0.0f64, |m, v| m.max(v.abs()));
        for n in 0..=n_check.min(w.seq.len() - 1) {
            if (w.seq.get(n) - vals[n]).abs() > opts.rec_tol * scale {
                reconstruction_ok = false;
            }
        }
    }

    // reciprocal sign pattern for b in {0, a}
    let g_req = algebra::reciprocal_len_cap(f, opts.g_len.max(4 * n_check + 64));
    if g_req < 2 * n_check + 2 {
        return Err(Error::InvalidInput(format!(
            "stored truncation {} too short to certify up to n = {n_check}",
            f.len()
        )));
    }
    let g = algebra::reciprocal_coeffs(f, g_req)?;
    let g_fn = AnalyticFn::with_form(
        CoeffSeq::new("g", g)?,
        match f.form() {
            ClosedForm::KPower { s } => ClosedForm::KPower { s: -s },
            _ => ClosedForm::Custom,
        },
    );
    let mut g_sign_ok = true;
    {
        let gv = &g_fn.coeffs().values()[..=n_check.min(g_fn.len() - 1)];
        margins.record(gv[0]);
        if gv[0] < -opts.sign_tol {
            g_sign_ok = false;
        }
        for &v in gv.iter().take(n_check + 1).skip(1) {
            margins.record(-v);
            if v > opts.sign_tol {
                g_sign_ok = false;
            }
        }
    }
    if alpha > 0.0 {
        let g_tail = g_fn.coeff_tail_model();
        let wg = d_beta_window(&g_fn, alpha, &g_tail, n_check + 1)?;
        margins.record(wg[0]);
        if wg[0] < -opts.sign_tol {
            g_sign_ok = false;
        }
        for &v in wg.iter().take(n_check + 1).skip(1) {
            margins.record(-v);
            if v > opts.sign_tol {
                g_sign_ok = false;
            }
        }
    }

    let ok_margin = if margins.worst.is_finite() {
        margins.worst
    } else {
        0.0
    };
    Ok(AdmissibilityCertificate {
        alpha,
        checked_up_to: n_check,
        f_nonneg_ok: f_nonneg,
        f_dalpha_nonneg_ok: dalpha_nonneg,
        reconstruction_ok,
        g_sign_ok: g_sign_ok && margins.ok,
        worst_margin: ok_margin,
        boundary_hits: margins.boundary,
        strict: margins.boundary == 0 && ok_margin > opts.sign_tol,
        sign_tol: opts.sign_tol,
    })
}

/// Log-convexity certificate of degree `m`: for each `p <= m`,
/// `D^p f(j) > 0` and `(D^p f(j+1))^2 <= D^p f(j) D^p f(j+2)` over the
/// window.
#[derive(Debug, Clone, Serialize)]
pub struct LogConvexityCertificate {
    pub degree_m: usize,
    pub checked_up_to: usize,
    pub per_p_ok: Vec<bool>,
    pub worst_margin: f64,
}

impl LogConvexityCertificate {
    pub fn positive(&self) -> bool {
        self.per_p_ok.iter().all(|&b| b)
    }
}

/// Check log-convexity of degree `m`. Integer differences are finite sums,
/// so the only data requirement is `f` long enough for the window.
pub fn check_log_convex(
    f: &AnalyticFn,
    m: usize,
    n_check: usize,
    opts: &CertOptions,
) -> Result<LogConvexityCertificate> {
    let needed = n_check + m + 3;
    if f.len() < needed {
        return Err(Error::InvalidInput(format!(
            "need {needed} coefficients for degree-{m} convexity over n <= {n_check}"
        )));
    }
    let vals = f.coeffs().values();
    let mut per_p_ok = Vec::with_capacity(m + 1);
    let mut worst = f64::INFINITY;
    for p in 0..=m {
        let d = fracdiff::integer_diff(vals, p);
        let mut ok = true;
        for j in 0..=n_check {
            // strict positivity (the margin itself is reported, so
            // tiny-but-positive values pass and stay visible)
            if d[j] <= 0.0 {
                ok = false;
            }
            worst = worst.min(d[j]);
            // convexity of successive ratios (non-strict allowed)
            let slack = d[j] * d[j + 2] - d[j + 1] * d[j + 1];
            let rel = slack / (d[j + 1] * d[j + 1]).max(1e-300);
            if rel < -opts.sign_tol {
                ok = false;
            }
            if slack != 0.0 {
                worst = worst.min(rel);
            }
        }
        per_p_ok.push(ok);
    }
    Ok(LogConvexityCertificate {
        degree_m: m,
        checked_up_to: n_check,
        per_p_ok,
        worst_margin: worst,
    })
}

/// Result of verifying the sign conclusion `W^b g(0) > 0`, `W^b g(j) < 0`
/// at sampled orders `b`, for a decreasing log-convex `f`.
#[derive(Debug, Clone, Serialize)]
pub struct KaluzaReport {
    pub degree_m: usize,
    pub checked_up_to: usize,
    pub hypotheses_ok: bool,
    /// `(beta, signs hold, worst margin at this beta)`
    pub per_beta: Vec<(f64, bool, f64)>,
    pub strict: bool,
    pub boundary_hits: usize,
}

impl KaluzaReport {
    pub fn conclusion_holds(&self) -> bool {
        self.per_beta.iter().all(|&(_, ok, _)| ok)
    }
}

/// Verify the log-convexity sign conclusion at each sampled order. This is
/// a proved implication: on inputs satisfying the hypotheses, failures
/// beyond tolerance indicate an implementation bug, and the self-test
/// treats them as such.
pub fn kaluza_conclusion_check(
    f: &AnalyticFn,
    m: usize,
    beta_samples: &[f64],
    n_check: usize,
    opts: &CertOptions,
) -> Result<KaluzaReport> {
    // hypotheses: decreasing, log-convex of degree m, decaying weighted
    // differences
    let vals = f.coeffs().values();
    let decreasing = vals.windows(2).all(|w| w[1] <= w[0] + opts.sign_tol);
    let convex = check_log_convex(f, m, n_check, opts)
        .map(|c| c.positive())
        .unwrap_or(false);
    // D^b f(j) j^b -> 0 probed as a decreasing trend over the last decade
    let mut decay_ok = true;
    for &beta in beta_samples {
        if beta == 0.0 {
            continue;
        }
        let wide = (4 * n_check + 64).min(f.len() - 1);
        let d = d_beta_window(f, beta, &f.coeff_tail_model(), wide)?;
        let hi = d.len() - 1;
        let lo = hi / 2;
        let first = d[lo] * (lo as f64).powf(beta);
        let last = d[hi] * (hi as f64).powf(beta);
        if !(last.abs() < first.abs()) {
            decay_ok = false;
        }
    }
    let hypotheses_ok = decreasing && convex && decay_ok;

    let g_req = algebra::reciprocal_len_cap(f, opts.g_len.max(4 * n_check + 64));
    let g = algebra::reciprocal_coeffs(f, g_req)?;
    let g_fn = AnalyticFn::with_form(
        CoeffSeq::new("g", g)?,
        match f.form() {
            ClosedForm::KPower { s } => ClosedForm::KPower { s: -s },
            _ => ClosedForm::Custom,
        },
    );

    let mut per_beta = Vec::new();
    let mut boundary = 0usize;
    let mut strict = true;
    for &beta in beta_samples {
        let w = if beta == 0.0 {
            g_fn.coeffs().values()[..=n_check.min(g_fn.len() - 1)].to_vec()
        } else {
            d_beta_window(&g_fn, beta, &g_fn.coeff_tail_model(), n_check + 1)?
        };
        let mut ok = true;
        let mut margin = f64::INFINITY;
        {
            let mut record = |v: f64| {
                if v == 0.0 {
                    boundary += 1;
                    strict = false;
                    return;
                }
                margin = margin.min(v);
                if v < -opts.sign_tol {
                    ok = false;
                }
                if v <= opts.sign_tol {
                    strict = false;
                }
            };
            record(w[0]);
            for &v in w.iter().take(n_check + 1).skip(1) {
                record(-v);
            }
        }
        per_beta.push((beta, ok, if margin.is_finite() { margin } else { 0.0 }));
    }

    Ok(KaluzaReport {
        degree_m: m,
        checked_up_to: n_check,
        hypotheses_ok,
        per_beta,
        strict,
        boundary_hits: boundary,
    })
}

/// Residual of the convolution-difference formula
///
/// `W^a(f*h)(v) = (sum_{j=0}^v sum_{l=v-j}^v - sum_{j>v} sum_{l>v})
///                k^a(l+j-v) D^a f(j) W^a h(l)`.
///
/// The head is finite; the tail double sum is truncated at three geometric
/// cutoffs and extrapolated in the cutoff.
pub fn convolution_diff_identity_residual(
    f: &AnalyticFn,
    h: &AnalyticFn,
    alpha: f64,
    v: usize,
) -> Result<f64> {
    Ok(convolution_diff_identity_residuals(f, h, alpha, &[v])?[0])
}

/// Same residual at several head indices, sharing the expensive difference
/// windows across them.
pub fn convolution_diff_identity_residuals(
    f: &AnalyticFn,
    h: &AnalyticFn,
    alpha: f64,
    vs: &[usize],
) -> Result<Vec<f64>> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("identity needs alpha > 0".into()));
    }
    let v_max = vs.iter().copied().max().unwrap_or(0);
    // hypothesis screening (windowed): f bounded nonnegative with
    // nonnegative differences; h with the admissible sign pattern
    let fv = f.coeffs().values();
    if fv.iter().any(|&x| x < -1e-12) {
        return Err(Error::Hypothesis("first factor must be nonnegative".into()));
    }
    let screen = 64.min(f.len() - 1);
    let df_screen = d_beta_window(f, alpha, &f.coeff_tail_model(), screen)?;
    if df_screen.iter().any(|&x| x < -1e-9) {
        return Err(Error::Hypothesis(
            "first factor must have nonnegative fractional differences".into(),
        ));
    }
    let wh_screen = {
        let w = fracdiff::weyl_diff_window(h.coeffs(), alpha, &h.coeff_tail_model(), screen)?;
        w.seq.values().to_vec()
    };
    if wh_screen[0] < -1e-9 || wh_screen[1..].iter().any(|&x| x > 1e-9) {
        return Err(Error::Hypothesis(
            "second factor must have the admissible sign pattern".into(),
        ));
    }

    let cut = 16_384usize.min(f.len() - 1).min(h.len() - 1);
    let big = cut + alpha.ceil() as usize + 4;

    // left side: W^a (f*h), with the product's closed form when both
    // factors are binomial series (group law)
    let conv = convolve_slices(&f.coeffs().values()[..=big], &h.coeffs().values()[..=big]);
    let conv_fn = match (f.form(), h.form()) {
        (ClosedForm::KPower { s: s1 }, ClosedForm::KPower { s: s2 }) => AnalyticFn::with_form(
            CoeffSeq::new("f*h", conv)?,
            ClosedForm::KPower { s: s1 + s2 },
        ),
        _ => AnalyticFn::from_coeffs(CoeffSeq::new("f*h", conv)?),
    };
    let lhs_window = fracdiff::weyl_diff_window(
        conv_fn.coeffs(),
        alpha,
        &conv_fn.coeff_tail_model(),
        v_max + 1,
    )?;

    // ingredient windows, shared across the head indices
    let df = d_beta_window(f, alpha, &f.coeff_tail_model(), cut + 1)?;
    let wh = {
        let w = fracdiff::weyl_diff_window(h.coeffs(), alpha, &h.coeff_tail_model(), cut + 1)?;
        w.seq.values().to_vec()
    };
    let kw = k_row(alpha, 2 * cut + 2);
    let lh = cut.min(wh.len() - 1);
    let wh_tailfit = sumtail::fit_two_term(&wh, h.walpha_exponent(alpha));
    let outer_q = f.walpha_exponent(alpha).map(|e| e + alpha - 1.0);

    let mut residuals = Vec::with_capacity(vs.len());
    for &v in vs {
        // finite head
        let mut head = 0.0;
        for j in 0..=v {
            for l in (v - j)..=v {
                head += kw[l + j - v] * df[j] * wh[l];
            }
        }

        // tail double sum over j, l > v: inner l-sums with a modelled
        // l-tail, then the outer j-series with a modelled j-tail
        let mut outer_terms = Vec::with_capacity(cut - v);
        for j in (v + 1)..=cut {
            let mut s_j = 0.0;
            for l in (v + 1)..=lh {
                s_j += kw[l + j - v] * wh[l];
            }
            if let Some((q, a_amp, b_amp)) = wh_tailfit {
                let (t1, _) = sumtail::k_weighted_power_tail(
                    alpha,
                    lh + 1 + j - v,
                    v as f64 - j as f64,
                    a_amp,
                    q,
                )?;
                s_j += t1;
                if b_amp != 0.0 && q - 1.0 + alpha < 0.0 {
                    let (t2, _) = sumtail::k_weighted_power_tail(
                        alpha,
                        lh + 1 + j - v,
                        v as f64 - j as f64,
                        b_amp,
                        q - 1.0,
                    )?;
                    s_j += t2;
                }
            }
            outer_terms.push(df[j] * s_j);
        }
        let outer_fit = sumtail::scalar_series_tail(&outer_terms, outer_q);
        let tail_sum = outer_terms.iter().sum::<f64>()
            + if outer_fit.convergent {
                outer_fit.correction
            } else {
                0.0
            };
        residuals.push((lhs_window.seq.get(v) - (head - tail_sum)).abs());
    }
    Ok(residuals)
}

/// Residual of the reciprocal-coefficient balance identity: for integer
/// `p >= 1` and `v >= 1`,
///
/// `sum_{l=0}^v W^p g(l) sum_{j=v-l}^v k^p(j+l-v) D^p f(j)
///  = sum_{l>v} W^p g(l) sum_{j>v} k^p(j+l-v) D^p f(j)`.
///
/// `k^p(i)` is a polynomial of degree p-1 in `i`, so the inner j-sums
/// reduce to a few weighted moments of `D^p f`; the outer l-sum is
/// truncated at `n_tail` with a fitted power correction.
pub fn appendix_identity_residual(
    f: &AnalyticFn,
    p: usize,
    v: usize,
    n_tail: usize,
) -> Result<f64> {
    if p < 1 || v < 1 {
        return Err(Error::InvalidInput("identity needs p >= 1, v >= 1".into()));
    }
    let data_len = f.len() - 1;
    if data_len < 4 * v + 64 {
        return Err(Error::InvalidInput("input truncation too short".into()));
    }
    let dpf = fracdiff::integer_diff(f.coeffs().values(), p);

    // moments M_r = sum_{j>v} j^r D^p f(j), with tails under f's power
    // model differenced p times
    let (q_f, c_f, shift_f) = match f.coeff_tail_model() {
        TailModel::PowerTail {
            exponent,
            coefficient,
            shift,
        } => (exponent, coefficient, shift),
        TailModel::ZeroTail => (f64::NEG_INFINITY, 0.0, 0.0),
    };
    // p-th forward difference of C (j+shift)^q ~ C (-1)^p q(q-1)...(q-p+1)
    // (j+shift)^(q-p)
    let mut dq_c = c_f;
    for r in 0..p {
        dq_c *= -(q_f - r as f64);
    }
    let dq_exp = q_f - p as f64;

    // k^p(i) = C(i+p-1, p-1) as an explicit polynomial in i
    let mut poly = vec![1.0f64];
    for r in 1..p {
        let mut next = vec![0.0; poly.len() + 1];
        for (d, &c) in poly.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * r as f64;
        }
        poly = next;
    }
    let fact: f64 = (1..p).map(|r| r as f64).product();
    for c in &mut poly {
        *c /= fact.max(1.0);
    }

    let jmax = dpf.len() - 1;
    let mut moments = vec![0.0f64; poly.len()];
    for (r, mom) in moments.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &dv) in dpf.iter().enumerate().skip(v + 1) {
            acc += (j as f64).powi(r as i32) * dv;
        }
        if dq_c != 0.0 && c_f != 0.0 {
            // plain power sum: k^1 weights are identically one
            let (t, _e) = sumtail::k_weighted_power_tail(
                1.0,
                jmax + 1,
                shift_f,
                dq_c,
                dq_exp + r as f64,
            )?;
            acc += t;
        }
        *mom = acc;
    }
    let binom = |m: usize, t: usize| -> f64 {
        let mut c = 1.0;
        for i in 0..t {
            c = c * (m - i) as f64 / (i + 1) as f64;
        }
        c
    };
    // inner(l) = sum_{j>v} k^p(j+l-v) D^p f(j), expanded through the
    // binomial theorem into the moments
    let inner = |l: usize| -> f64 {
        let x = l as f64 - v as f64;
        let mut acc = 0.0;
        for (m, &cm) in poly.iter().enumerate() {
            let mut xt = 1.0;
            for t in 0..=m {
                acc += cm * binom(m, t) * xt * moments[m - t];
                xt *= x;
            }
        }
        acc
    };

    // reciprocal row, long enough for the outer tail
    let g_len = n_tail + p + 2;
    let g = algebra::reciprocal_coeffs(f, g_len + 1)?;
    let wpg = fracdiff::integer_diff(&g, p);

    // left side: finite head with direct inner sums
    let kw = k_row(p as f64, 2 * v + p + 2);
    let mut lhs = 0.0;
    for l in 0..=v {
        let mut s = 0.0;
        for j in (v - l)..=v {
            s += kw[j + l - v] * dpf[j];
        }
        lhs += wpg[l] * s;
    }

    // right side: outer sum over l > v with fitted power tail
    let lmax = n_tail.min(wpg.len() - 1);
    let terms: Vec<f64> = ((v + 1)..=lmax).map(|l| wpg[l] * inner(l)).collect();
    let rhs_partial: f64 = terms.iter().sum();
    let fit = sumtail::scalar_series_tail(&terms, None);
    let rhs = rhs_partial + if fit.convergent { fit.correction } else { 0.0 };

    Ok((lhs - rhs).abs())
}
