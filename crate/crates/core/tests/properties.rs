use phi_ineq_core::bounds::{
    coef_a1, coef_weighted, s_f, theorem1_bound, theorem2_bound, EvalParams, WeightedCoef,
};
use phi_ineq_core::convexity::{check_phi_convex, PhiKernel};
use phi_ineq_core::fracint::Interval;
use phi_ineq_core::function::TestFunction;
use phi_ineq_core::quadrature::{integrate, QuadratureSpec};
use phi_ineq_core::specfun::{beta_fn, gauss_2f1, incomplete_beta};
use proptest::prelude::*;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn kernel_strategy() -> impl Strategy<Value = PhiKernel> {
    prop_oneof![
        Just(PhiKernel::Constant),
        (0.1f64..=1.0).prop_map(PhiKernel::PowerS),
        Just(PhiKernel::Mt),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_is_symmetric(x in 0.05f64..20.0, y in 0.05f64..20.0) {
        let (u, v) = (beta_fn(x, y).unwrap(), beta_fn(y, x).unwrap());
        prop_assert!((u - v).abs() <= 1e-12 * u.abs());
    }

    #[test]
    fn incomplete_beta_is_monotone_and_reaches_the_complete_value(
        x in 0.2f64..6.0, y in 0.2f64..6.0, u in 0.01f64..0.98, du in 0.001f64..0.02,
    ) {
        let lo = incomplete_beta(u, x, y).unwrap().value;
        let hi = incomplete_beta(u + du, x, y).unwrap().value;
        prop_assert!(hi >= lo);
        let full = incomplete_beta(1.0, x, y).unwrap().value;
        let complete = beta_fn(x, y).unwrap();
        prop_assert!((full - complete).abs() <= 1e-12 * complete);
    }

    #[test]
    fn hypergeometric_matches_log_series(z in 0.0f64..0.98) {
        let got = gauss_2f1(1.0, 1.0, 2.0, z).unwrap().value;
        let want = if z == 0.0 { 1.0 } else { -(-z).ln_1p() / z };
        prop_assert!((got - want).abs() <= 1e-10 * want.abs(), "z={} {} vs {}", z, got, want);
        let swapped = gauss_2f1(0.5, 1.5, 2.5, z).unwrap().value;
        let again = gauss_2f1(1.5, 0.5, 2.5, z).unwrap().value;
        prop_assert_eq!(swapped, again);
    }

    #[test]
    fn quadrature_is_additive(lo in -2.0f64..0.0, hi in 0.5f64..3.0, w in 0.5f64..6.0, frac in 0.1f64..0.9) {
        let f = |t: f64| (w * t).sin() + t * t;
        let mid = lo + frac * (hi - lo);
        let whole = integrate(f, lo, hi, &quad()).unwrap().value;
        let parts = integrate(f, lo, mid, &quad()).unwrap().value + integrate(f, mid, hi, &quad()).unwrap().value;
        prop_assert!((whole - parts).abs() <= 1e-10 * whole.abs().max(1.0));
    }

    #[test]
    fn convexity_verdict_is_mirror_symmetric(c2 in 0.0f64..3.0, c3 in -1.0f64..1.0, w in 1.0f64..8.0) {
        let iv = Interval::new(0.0, 2.0).unwrap();
        let g = |t: f64| c2 * t * t + c3 * (w * t).sin();
        let h = |t: f64| g(2.0 - t);
        let a = check_phi_convex(g, &PhiKernel::Constant, iv, 21, 1e-9).unwrap();
        let b = check_phi_convex(h, &PhiKernel::Constant, iv, 21, 1e-9).unwrap();
        prop_assert!((a.worst_violation - b.worst_violation).abs() <= 1e-9);
    }

    #[test]
    fn power_kernel_with_unit_index_is_classical(c in -1.0f64..1.0, w in 1.0f64..8.0) {
        let g = |t: f64| t * t + c * (w * t).cos();
        let iv = Interval::unit();
        let a = check_phi_convex(g, &PhiKernel::Constant, iv, 17, 1e-9).unwrap();
        let b = check_phi_convex(g, &PhiKernel::PowerS(1.0), iv, 17, 1e-9).unwrap();
        prop_assert_eq!(a.holds, b.holds);
        prop_assert!((a.worst_violation - b.worst_violation).abs() <= 1e-12);
    }

    #[test]
    fn convex_quadratics_are_classically_convex(a in 0.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        let w = check_phi_convex(|t: f64| a * t * t + b * t + c, &PhiKernel::Constant, Interval::unit(), 15, 1e-9).unwrap();
        prop_assert!(w.holds);
    }

    #[test]
    fn coefficients_and_bounds_are_nonnegative(
        alpha in 0.2f64..3.5, lambda in 0.0f64..=1.0, xi in 0.0f64..=1.0, q in 1.0f64..4.0,
        kernel in kernel_strategy(),
    ) {
        prop_assert!(coef_a1(alpha, lambda).unwrap() >= 0.0);
        for which in [WeightedCoef::A2, WeightedCoef::A3] {
            prop_assert!(coef_weighted(alpha, lambda, &kernel, which, &quad()).unwrap() >= -1e-15);
        }
        let f = TestFunction::from_expr("f", "exp(2*t) + t^3", Interval::unit()).unwrap();
        let params = EvalParams::new(Interval::unit(), xi, lambda, alpha, q).unwrap();
        prop_assert!(s_f(&f, &params, &quad()).unwrap().is_finite());
        prop_assert!(theorem1_bound(&f, &params, &kernel, &quad()).unwrap() >= 0.0);
        if q > 1.0 {
            prop_assert!(theorem2_bound(&f, &params, &kernel, &quad()).unwrap() >= 0.0);
        }
    }
}
