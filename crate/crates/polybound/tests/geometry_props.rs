use proptest::prelude::*;

use polybound::geometry::{inertia_floor, Domain};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn any_domain() -> impl Strategy<Value = Domain> {
    prop_oneof![
        prop::collection::vec(0.2f64..3.0, 2..=5).prop_map(|s| Domain::rectangle(&s).unwrap()),
        (2usize..=8, 0.2f64..3.0).prop_map(|(n, r)| Domain::ball(n, r).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scaling_covariance(d in any_domain(), c in 0.5f64..2.0) {
        let s = d.scaled(c).unwrap();
        let n = d.n() as i32;
        let (a, b) = (d.derived(), s.derived());
        prop_assert!(close(b.volume, a.volume * c.powi(n), 1e-12));
        prop_assert!(close(b.inertia, a.inertia * c.powi(n + 2), 1e-12));
        prop_assert!(close(b.alpha, a.alpha * c.powi(n), 1e-12));
        prop_assert!(close(b.rho, a.rho * c.powi(n + 1), 1e-12));
    }

    /// ∫_box |x − o|² = V Σ (a²/3 − a o + o²); the stored inertia is the
    /// centroidal one whatever origin the box is placed against.
    #[test]
    fn inertia_is_centroidal(sides in prop::collection::vec(0.2f64..3.0, 2..=4), shift in prop::collection::vec(-2.0f64..2.0, 4)) {
        let d = Domain::rectangle(&sides).unwrap();
        let v: f64 = sides.iter().product();
        let about_o: f64 = sides.iter().zip(&shift).map(|(a, o)| v * (a * a / 3.0 - a * o + o * o)).sum();
        let offset: f64 = sides.iter().zip(&shift).map(|(a, o)| (a / 2.0 - o).powi(2)).sum();
        prop_assert!(close(d.inertia(), about_o - v * offset, 1e-10));
        prop_assert!(d.inertia() <= about_o * (1.0 + 1e-12));
    }

    #[test]
    fn inertia_floor_holds_for_constructible_shapes(d in any_domain()) {
        prop_assert!(d.inertia_floor_check());
    }

    #[test]
    fn explicit_below_the_floor_is_rejected(n in 2usize..=6, v in 0.1f64..10.0, f in 0.1f64..0.999) {
        prop_assert!(Domain::explicit(n, v, f * inertia_floor(n, v)).is_err());
        prop_assert!(Domain::explicit(n, v, 1.5 * inertia_floor(n, v)).is_ok());
    }
}
