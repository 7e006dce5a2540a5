//! Property-based invariants across modules: randomized orders and
//! coefficient data against the algebraic laws the library is built on.

use fraccalc::algebra::{invert_series, AnalyticFn};
use fraccalc::cesaro::{cesaro_numbers, convolve, CoeffSeq};
use fraccalc::fracdiff::{self, TailModel};
use fraccalc::special;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_random_orders(a in -1.9f64..2.4, b in -1.9f64..2.4) {
        let n = 192;
        let conv = convolve(&cesaro_numbers(a, n), &cesaro_numbers(b, n));
        let kab = cesaro_numbers(a + b, n);
        for i in 0..=n {
            let tol = 1e-10 * kab.get(i).abs().max(1.0);
            prop_assert!((conv.get(i) - kab.get(i)).abs() <= tol, "index {i}");
        }
    }

    #[test]
    fn digamma_recurrence_random(x in 0.1f64..100.0) {
        let lhs = special::digamma(x + 1.0).unwrap();
        let rhs = special::digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn beta_symmetry_random(a in 0.05f64..60.0, b in 0.05f64..60.0) {
        prop_assert_eq!(
            special::beta(a, b).unwrap(),
            special::beta(b, a).unwrap()
        );
        prop_assert!(
            (special::beta(a, 1.0).unwrap() - 1.0 / a).abs() <= 1e-12 / a
        );
    }

    #[test]
    fn laguerre_recurrence_random(n in 2usize..600, a in -0.9f64..4.0, x in 0.0f64..8.0) {
        let ln = special::laguerre(n, a, x).unwrap();
        let l1 = special::laguerre(n - 1, a, x).unwrap();
        let l2 = special::laguerre(n - 2, a, x).unwrap();
        let nf = n as f64;
        let rhs = ((2.0 * nf - 1.0 + a - x) * l1 - (nf - 1.0 + a) * l2) / nf;
        prop_assert!((ln - rhs).abs() <= 1e-10 * ln.abs().max(1.0));
    }

    #[test]
    fn inversion_round_trip_random(seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..129)
            .map(|n| {
                if n == 0 {
                    rng.gen_range(0.5..2.0)
                } else {
                    rng.gen_range(-0.5..0.5) * 0.85f64.powi(n as i32)
                }
            })
            .collect();
        let f = AnalyticFn::from_coeffs(CoeffSeq::new("rand", vals).unwrap());
        let g = invert_series(&f, 128).unwrap();
        let back = invert_series(&g, 128).unwrap();
        for n in 0..=128 {
            prop_assert!(
                (back.coeffs().get(n) - f.coeffs().get(n)).abs() <= 1e-10,
                "index {n}"
            );
        }
    }

    #[test]
    fn weyl_and_forward_difference_agree(alpha in 0.15f64..1.9, mu in 1.4f64..3.5) {
        // geometric inputs are summable against both weight families
        let vals: Vec<f64> = (0..256).map(|n| mu.powi(-(n as i32 + 1))).collect();
        let f = CoeffSeq::new("p_mu", vals).unwrap();
        let w = fracdiff::weyl_diff_window(&f, alpha, &TailModel::ZeroTail, 48).unwrap();
        let d = fracdiff::d_alpha_window(&f, alpha, &TailModel::ZeroTail, 48).unwrap();
        for n in 0..48 {
            prop_assert!((w.seq.get(n) - d.seq.get(n)).abs() <= 1e-9, "n={n}");
        }
    }

    #[test]
    fn inversion_identity_random_order(alpha in 0.2f64..2.5) {
        let vals: Vec<f64> = (0..160).map(|n| 2.5f64.powi(-(n as i32 + 1))).collect();
        let f = CoeffSeq::new("geo", vals).unwrap();
        prop_assert!(fracdiff::inversion_residual(&f, alpha).unwrap() <= 1e-8);
    }
}
