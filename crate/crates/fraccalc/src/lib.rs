//! Fractional discrete calculus and the functional calculus of Cesàro-bounded
//! operators.
//!
//! The library is organized around one scalar carrier ([`CoeffSeq`], a finite
//! truncation of a one-sided sequence) and a handful of layers built on it:
//!
//! * [`special`] — log-gamma, digamma, Beta, generalized Laguerre polynomials.
//! * [`cesaro`] — Cesàro numbers `k^a(n)` (Taylor coefficients of `(1-z)^-a`),
//!   their recurrences, signs, asymptotics and convolution algebra.
//! * [`fracdiff`] — Weyl sums `W^-a`, Weyl differences `W^a` and the forward
//!   difference `D^a`, with explicit truncation-tail policies.
//! * [`algebra`] — the weighted Banach algebra of power series with norm
//!   `sum |W^a f(n)| k^(a+1)(n)`, series inversion, boundary evaluation.
//! * [`admissibility`] — sign certificates for admissible functions,
//!   log-convexity of higher difference order, and the structural
//!   convolution identities they rest on.
//! * [`approxid`] — the approximate-identity families generated by an
//!   admissible function (fractional partial sums and Taylor partial sums).
//! * [`operators`] — concrete operator models (backward shift on weighted
//!   `l^2`, the complemented Volterra operator, dense matrices), Cesàro sums
//!   and means, boundedness-constant estimation and ergodic diagnostics.
//! * [`funcalc`] — the series functional calculus: fractional powers
//!   `(I-T)^±s`, the fractional Poisson solver, `log(I-T)` and the
//!   Cesàro-smoothed one-sided Hilbert transform.
//!
//! Everything is plain `f64`; every adaptive summation reports what it
//! truncated and how much it believes the neglected tail is worth.

pub mod admissibility;
pub mod algebra;
pub mod approxid;
pub mod cesaro;
pub mod error;
pub mod fracdiff;
pub mod funcalc;
pub mod operators;
pub mod selftest;
pub mod special;
mod sumtail;

pub use cesaro::CoeffSeq;
pub use error::{Error, Result};
pub use fracdiff::TailModel;
