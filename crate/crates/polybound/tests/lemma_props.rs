use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polybound::deep::FifthExponent;
use polybound::lemmas::{
    f_eval, f_scale, g_eval, g_inflection, g_scale, g_second_difference, poly_residual, moment_exact_minimum,
    moment_lower_bound, moment_lower_bound_variant, random_constraint, PolyParams, PsiConstraint,
};

/// (d, q, m) with d ≥ m + 1, the range in which the inequality holds.
fn safe_params() -> impl Strategy<Value = PolyParams> {
    (2.0f64..10.0, 2.0f64..6.0)
        .prop_flat_map(|(d, q)| (Just(d), Just(q), 0..=(d - 1.0).floor() as u32))
        .prop_map(|(d, q, m)| PolyParams::new(d, q, m).unwrap())
}

fn any_params() -> impl Strategy<Value = PolyParams> {
    (2.0f64..10.0, 2.0f64..6.0)
        .prop_flat_map(|(d, q)| (Just(d), Just(q), 0..=(d + q - 2.0).floor() as u32))
        .prop_map(|(d, q, m)| PolyParams::new(d, q, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// residual(s, τ) = τ^{d+q} f(s/τ), so τ^{d+q}·f_scale bounds its rounding error.
    #[test]
    fn polynomial_inequality_holds_when_d_exceeds_m(p in safe_params(), ls in -2.0f64..2.0, lt in -2.0f64..2.0) {
        let (s, tau) = (10f64.powf(ls), 10f64.powf(lt));
        let r = poly_residual(&p, s, tau).unwrap();
        let scale = tau.powf(p.d() + p.q()) * f_scale(&p, s / tau);
        prop_assert!(r >= -1e-12 * scale, "{:?} s={} tau={} residual={}", p, s, tau, r);
    }

    #[test]
    fn f_factors_through_g(p in any_params(), lt in -2.0f64..1.0) {
        let t = 10f64.powf(lt);
        let f = f_eval(&p, t).unwrap();
        let g = g_eval(&p, t).unwrap();
        prop_assert!((f - t.powi(p.m() as i32 + 1) * g).abs() <= 1e-10 * f_scale(&p, t), "{:?} t={}", p, t);
    }

    #[test]
    fn g_is_convex_right_of_the_inflection(p in any_params(), u in 1e-3f64..3.0) {
        let t0 = g_inflection(&p);
        prop_assume!(t0.is_finite());
        let t = t0.max(1e-2) * u.exp();
        let dd = g_second_difference(&p, t, 1e-5);
        prop_assert!(dd >= -1e-8 * g_scale(&p, t) / (t * t), "{:?} t0={} t={} g''={}", p, t0, t, dd);
    }

    /// With the fifth exponent (N−5)/n the display stays under the exact
    /// minimum once n ≥ 5.
    #[test]
    fn derived_moment_bound_is_below_the_minimum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_constraint(&mut rng);
        prop_assume!(c.n >= 5);
        let lb = moment_lower_bound_variant(&c, FifthExponent::Derived);
        let min = moment_exact_minimum(&c).unwrap();
        prop_assert!(lb <= min * (1.0 + 1e-9), "{:?}: {} > {}", c, lb, min);
    }
}

/// Below d = m + 1 the −(d+q)t^d term beats q(m+2)t^{m+1} for small t.
#[test]
fn polynomial_inequality_fails_below_d_equal_m_plus_one() {
    let p = PolyParams::new(2.0, 6.0, 6).unwrap();
    let r = poly_residual(&p, 0.925, 100.0).unwrap();
    assert!(r < -6.8e12, "{r}");
}

#[test]
fn printed_moment_bound_exceeds_the_minimum() {
    let c = PsiConstraint::new(6, 1, 6.079675533493332, 1.4071882154215662e-9, 0.19960843111944046).unwrap();
    let printed = moment_lower_bound(&c);
    let min = moment_exact_minimum(&c).unwrap();
    assert!(printed > 1.1 * min, "{printed} <= 1.1 * {min}");
}
