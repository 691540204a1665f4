use proptest::prelude::*;

use polybound::classical::weyl_term;
use polybound::critical::{master_bound, root_lower_estimate, solve_root, Branch};
use polybound::geometry::Domain;

/// (t+1)^{n+1} − t^{n+1} from the binomial sum, independent of the library.
fn power_difference(n: usize, t: f64) -> f64 {
    let mut c = 1.0;
    let mut s = 0.0;
    for i in 0..=n {
        s += c * t.powi(i as i32);
        c *= (n + 1 - i) as f64 / (i + 1) as f64;
    }
    s
}

fn any_domain() -> impl Strategy<Value = Domain> {
    prop_oneof![
        prop::collection::vec(0.2f64..3.0, 2..=6).prop_map(|s| Domain::rectangle(&s).unwrap()),
        (2usize..=8, 0.2f64..3.0).prop_map(|(n, r)| Domain::ball(n, r).unwrap()),
    ]
}

fn branch_case() -> impl Strategy<Value = (Branch, usize)> {
    prop_oneof![
        Just((Branch::N3, 3)),
        Just((Branch::N4, 4)),
        Just((Branch::N5, 5)),
        Just((Branch::N6, 6)),
        (5usize..=12).prop_map(|n| (Branch::HighDim, n)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn root_residual(n in 2usize..=12, lq in 2f64.ln()..1e12f64.ln()) {
        let q = lq.exp();
        let t = solve_root(n, q).unwrap();
        prop_assert!((power_difference(n, t) - q).abs() <= 1e-12 * q);
    }

    #[test]
    fn branch_estimates_stay_below_the_root((b, n) in branch_case(), decades in 0.0f64..8.0) {
        let q = b.q_threshold(n) * (1.0 + 1e-9) * 10f64.powf(decades);
        let est = root_lower_estimate(n, q).unwrap();
        let t = b.eval(n, ((q / (n as f64 + 1.0)).ln() / n as f64).exp());
        prop_assert!(t <= est.t_exact * (1.0 + 1e-12), "{:?} n={} Q={:e}: {} > {}", b, n, q, t, est.t_exact);
        if let Some(tl) = est.t_lower {
            prop_assert!(tl <= est.t_exact * (1.0 + 1e-12));
        }
    }

    #[test]
    fn master_is_monotone_and_above_weyl(dom in any_domain(), l in 1u32..=3, k in 1u64..=5000) {
        let d = dom.derived();
        let a = master_bound(&d, l, k).unwrap().value;
        let b = master_bound(&d, l, k + 1).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-12));
        if k >= 100 {
            prop_assert!(a >= weyl_term(&d, l, k) * (1.0 - 1e-9));
        }
    }
}
