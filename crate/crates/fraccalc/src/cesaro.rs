//! Cesàro numbers `k^a(n)` and the convolution algebra they generate.
//!
//! `k^a(n)` is the n-th Taylor coefficient of `(1-z)^-a`. The family
//! satisfies the group law `k^a * k^b = k^(a+b)` under sequence convolution,
//! `k^0` is the Dirac mass at 0, and `k^1` is the all-ones sequence. Rows
//! are always generated by the exact multiplicative recurrence
//!
//! `k^a(0) = 1,  k^a(n) = k^a(n-1) (n + a - 1) / n`,
//!
//! never by Gamma ratios; the ratio form `n^(a-1)/Gamma(a)` is kept as an
//! asymptotic cross-check only. For a non-positive integer order `-m` the
//! recurrence terminates exactly: entries beyond `n = m` are 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special;

/// Finite truncation of a one-sided real sequence `f(0..=N)`.
///
/// The universal scalar carrier: Cesàro rows, Taylor coefficients and
/// fractional differences all travel as `CoeffSeq`. Truncation length is
/// explicit everywhere; nothing zero-pads silently.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSeq {
    label: String,
    values: Vec<f64>,
}

impl CoeffSeq {
    /// Build from raw values. All entries must be finite and the sequence
    /// nonempty.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty coefficient sequence".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite coefficient {bad}"
            )));
        }
        Ok(CoeffSeq {
            label: label.into(),
            values,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Truncation index N; the sequence stores N+1 values.
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // constructor rejects empty sequences
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// CSV rendering with an `index,value` header, `.` decimal separator.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{i},{v}\n"));
        }
        out
    }

    /// Parse the `index,value` CSV format produced by [`CoeffSeq::to_csv`].
    pub fn from_csv(label: impl Into<String>, text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("index")) {
                continue;
            }
            let mut parts = line.split(',');
            let idx: usize = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad CSV line {}", lineno + 1)))?;
            let val: f64 = parts
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::InvalidInput(format!("bad CSV line {}", lineno + 1)))?;
            if idx != values.len() {
                return Err(Error::InvalidInput(format!(
                    "CSV indices must be contiguous from 0, got {idx} at position {}",
                    values.len()
                )));
            }
            values.push(val);
        }
        CoeffSeq::new(label, values)
    }
}

/// Dirac mass at 0, truncated at `n_max`.
pub fn dirac(n_max: usize) -> CoeffSeq {
    let mut v = vec![0.0; n_max + 1];
    v[0] = 1.0;
    CoeffSeq::new("delta_0", v).expect("finite")
}

/// Raw Cesàro row `k^a(0..=n_max)` as a bare vector (internal workhorse).
pub(crate) fn k_row(alpha: f64, n_max: usize) -> Vec<f64> {
    let mut v = Vec::with_capacity(n_max + 1);
    v.push(1.0);
    for n in 1..=n_max {
        let nf = n as f64;
        let prev = v[n - 1];
        v.push(prev * (nf + alpha - 1.0) / nf);
    }
    v
}

/// Cesàro numbers `k^alpha(0..=n_max)`.
pub fn cesaro_numbers(alpha: f64, n_max: usize) -> CoeffSeq {
    CoeffSeq::new(format!("k^{alpha}"), k_row(alpha, n_max)).expect("finite by recurrence")
}

/// Convolution `(a*b)(n) = sum_{j<=n} a(j) b(n-j)`, truncated at
/// `min(N_a, N_b)`. Direct O(N^2); identities in the test suite are the
/// oracle for any faster path.
pub fn convolve(a: &CoeffSeq, b: &CoeffSeq) -> CoeffSeq {
    let n = a.len().min(b.len());
    let out = convolve_slices(&a.values[..n], &b.values[..n]);
    CoeffSeq::new(format!("({})*({})", a.label, b.label), out).expect("finite")
}

pub(crate) fn convolve_slices(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    let mut out = vec![0.0; n];
    for (j, &aj) in a.iter().take(n).enumerate() {
        if aj == 0.0 {
            continue;
        }
        for (i, &bi) in b.iter().take(n - j).enumerate() {
            out[j + i] += aj * bi;
        }
    }
    out
}

/// Leading asymptotic term `n^(alpha-1) / Gamma(alpha)`.
///
/// The recurrence value satisfies `k^a(n) / cesaro_asymptotic(a, n) -> 1`
/// with an `O(1/n)` defect. Errors on the poles `alpha in {0,-1,-2,...}`.
pub fn cesaro_asymptotic(alpha: f64, n: usize) -> Result<f64> {
    if alpha <= 0.0 && alpha == alpha.floor() {
        return Err(Error::Domain(format!(
            "asymptotic undefined at pole alpha = {alpha}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("asymptotic needs n >= 1".into()));
    }
    let g = special::gamma_signed(alpha)?;
    Ok((n as f64).powf(alpha - 1.0) / g)
}

/// Signs of `k^(-alpha)(n)` for `n <= n_max`.
///
/// For non-integer `alpha > 0` with `m < alpha < m+1` the pattern is
/// `(-1)^n` up to `n = m` and then constantly `(-1)^(m+1)`; for integer
/// `alpha = m` the row ends with exact zeros after `n = m`. Signs are read
/// off the recurrence values, whose zeros are exact.
pub fn sign_pattern(alpha: f64, n_max: usize) -> Vec<i8> {
    k_row(-alpha, n_max)
        .iter()
        .map(|&v| {
            if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Residual of the kernel cross-identity
///
/// `k^a(q+h) = - sum_{p=0}^{q-1} k^a(p) sum_{j=q-p}^{h+q-p} k^-a(j) k^a(h+q-p-j)`
///
/// for `alpha > 0`, `q >= 1`, `h >= 0`. Returns the absolute defect.
pub fn kernel_identity_check(alpha: f64, q: usize, h: usize) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain("kernel identity needs alpha > 0".into()));
    }
    if q < 1 {
        return Err(Error::InvalidInput("kernel identity needs q >= 1".into()));
    }
    let top = q + h;
    let kpos = k_row(alpha, top);
    let kneg = k_row(-alpha, top);
    // Kahan-compensated outer sum: the terms reach the magnitude of
    // k^a(q+h) itself and cancel down to it.
    let mut rhs = 0.0;
    let mut comp = 0.0;
    for (p, &kp) in kpos.iter().enumerate().take(q) {
        let mut inner = 0.0;
        let mut icomp = 0.0;
        for j in (q - p)..=(h + q - p) {
            let t = kneg[j] * kpos[h + q - p - j];
            let y = t - icomp;
            let s = inner + y;
            icomp = (s - inner) - y;
            inner = s;
        }
        let t = kp * inner;
        let y = t - comp;
        let s = rhs + y;
        comp = (s - rhs) - y;
        rhs = s;
    }
    Ok((kpos[top] + rhs).abs())
}
