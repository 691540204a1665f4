use std::f64::consts::PI;

use proptest::prelude::*;

use polybound::critical::master_bound;
use polybound::deep::{display_terms, thm_for, thm_n2, thm_unrestricted, thresholds};
use polybound::geometry::Domain;

fn any_domain() -> impl Strategy<Value = Domain> {
    prop_oneof![
        prop::collection::vec(0.2f64..3.0, 2..=7).prop_map(|s| Domain::rectangle(&s).unwrap()),
        (2usize..=8, 0.2f64..3.0).prop_map(|(n, r)| Domain::ball(n, r).unwrap()),
    ]
}

/// (n/(n+2l)) (2π)^{2l} / (ω_n V)^{2l/n} k^{(2l+n)/n}
fn weyl_constant_term(n: usize, omega: f64, v: f64, l: u32, k: u64) -> f64 {
    let (nf, lf) = (n as f64, l as f64);
    nf / (nf + 2.0 * lf) * (2.0 * PI).powf(2.0 * lf) / (omega * v).powf(2.0 * lf / nf) * (k as f64).powf((2.0 * lf + nf) / nf)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn every_theorem_leads_with_the_weyl_term(dom in any_domain(), l in 1u32..=6, k in 1u64..=100_000) {
        let d = dom.derived();
        let want = weyl_constant_term(d.n, d.omega_n, d.volume, l, k);
        if let Some(terms) = display_terms(&d, l, k) {
            prop_assert!((terms[0].value - want).abs() <= 1e-12 * want, "{} vs {}", terms[0].value, want);
        }
        let u = thm_unrestricted(&d, l, k).unwrap();
        if u.valid {
            prop_assert!((u.terms[0].1 - want).abs() <= 1e-12 * want);
        }
    }

    /// Checked where the expansions are derived: the n = 2 display for
    /// l ≤ 2 and the unrestricted bound for n ≥ 5. The other cases have
    /// standing counterexamples below.
    #[test]
    fn theorems_relax_the_master_bound(dom in any_domain(), l in 1u32..=4, lk in 0f64..14.0) {
        let d = dom.derived();
        let k = lk.exp().round().max(1.0) as u64;
        let m = master_bound(&d, l, k).unwrap().value;
        let t = thm_for(&d, l, k).unwrap();
        if t.valid && (d.n > 2 || l <= 2) {
            prop_assert!(t.value <= m * (1.0 + 1e-9), "{} > {}", t.value, m);
        }
        let u = thm_unrestricted(&d, l, k).unwrap();
        if u.valid && d.n >= 5 {
            prop_assert!(u.value <= m * (1.0 + 1e-9), "{} > {}", u.value, m);
        }
    }

    #[test]
    fn thresholds_never_overflow(n in 2usize..=40, l in 1u32..=30) {
        let th = thresholds(n, l).unwrap();
        let ln = th.ln_k_required();
        prop_assert!(th.entries.is_empty() || ln.is_finite(), "n={} l={} ln k = {}", n, l, ln);
    }
}

fn excess_over_master(n: usize, l: u32, k: u64, f: fn(&polybound::geometry::DerivedQuantities, u32, u64) -> polybound::error::Result<polybound::classical::BoundResult>) -> f64 {
    let d = Domain::ball(n, 1.0).unwrap().derived();
    let r = f(&d, l, k).unwrap();
    assert!(r.valid);
    r.value / master_bound(&d, l, k).unwrap().value - 1.0
}

/// For n ≤ 4 the unrestricted display's k^{(N-2)/n} coefficient is larger
/// than the master expansion's, so it sits above the master bound for all k.
#[test]
fn unrestricted_exceeds_master_in_low_dimension() {
    for (n, l) in [(2, 2), (3, 2), (4, 1)] {
        for k in [10, 1_000, 1_000_000] {
            assert!(excess_over_master(n, l, k, thm_unrestricted) > 0.0, "n={n} l={l} k={k}");
        }
    }
}

#[test]
fn n2_display_exceeds_master_from_l3() {
    for l in [3, 4, 5] {
        assert!(excess_over_master(2, l, 1_000, thm_n2) > 0.0, "l={l}");
    }
}
