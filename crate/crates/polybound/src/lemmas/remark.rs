//! The two-term correction f(a, l) to the Weyl term for Σ λ_j^{(l)}.
//!
//! The display writes the order as l where the poly-Laplacian order 2l is
//! meant (only then is every term of dimension length^{−2l}) and puts the
//! Weyl term with positive powers of ω_n α; both are read in the
//! dimensionally consistent way. β in c₁ is the slope bound ρ.

use crate::classical::{t, weyl_term, BoundResult};
use crate::critical::{q_of_k, root_nonneg};
use crate::error::{arg, Result};
use crate::geometry::DerivedQuantities;

use super::moment::sum_power_difference;

/// c₁ before the cap c₂ = min{1, c₁}.
pub fn remark_c1(d: &DerivedQuantities, l: u32, m: u32, k: u64, a: f64) -> f64 {
    let n = d.nf();
    let q = 2.0 * l as f64;
    let mf = m as f64;
    let ratio = (n * (mf + 1.0) + mf + 1.0 - q) / ((mf + 1.0) * ((mf + 2.0) * n + 2.0 + mf - q));
    ratio * d.rho * sum_power_difference(m + 2, a) / sum_power_difference(m + 3, a)
        * d.alpha.powf(-(n + 1.0) / n)
        * d.omega_n.powf(-1.0 / n)
        * (k as f64).powf(1.0 / n)
}

/// Limit of c₁ as k → ∞ (a grows like t̄, so S_{m+2}/S_{m+3} cancels k^{1/n}).
pub fn remark_c1_limit(n: usize, l: u32, m: u32) -> f64 {
    let (n, q, mf) = (n as f64, 2.0 * l as f64, m as f64);
    (n * (mf + 1.0) + mf + 1.0 - q) / ((mf + 1.0) * ((mf + 2.0) * n + 2.0 + mf - q)) * (mf + 2.0) / (mf + 3.0)
}

pub fn remark_f_bound(d: &DerivedQuantities, l: u32, m: u32, k: u64) -> Result<BoundResult> {
    if k == 0 || l == 0 {
        return arg("needs k >= 1 and l >= 1");
    }
    let id = "remark_f";
    let n = d.nf();
    if (d.n as u32) < m {
        return Ok(BoundResult::from_terms(id, k, vec![]).invalid(format!("needs n >= m, got n={}, m={m}", d.n)));
    }
    let q = 2.0 * l as f64;
    let mf = m as f64;
    let kf = k as f64;
    let (num, den) = (n * (mf + 1.0) + mf + 1.0 - q, (mf + 2.0) * n + 2.0 + mf - q);
    if num <= 0.0 || den <= 0.0 {
        return Ok(BoundResult::from_terms(id, k, vec![]).invalid(format!("c1 factors not positive: {num}, {den}")));
    }
    let a = root_nonneg(d.n, q_of_k(d, kf))?;
    let (w, al, r) = (d.omega_n, d.alpha, d.rho);
    let c1 = remark_c1(d, l, m, k, a);
    let c2 = c1.min(1.0);
    let first = c2 * q / (n + q) * (mf + 1.0) * sum_power_difference(m + 3, a) / (mf + 3.0)
        * w.powf((mf + 2.0 - q) / n)
        * al.powf(((mf + 2.0) * n + 2.0 + mf - q) / n)
        / r.powf(2.0 + mf)
        * kf.powf((n + q - 2.0 - mf) / n);
    let second = -q * sum_power_difference(m + 2, a) / (n + q)
        * w.powf((mf + 1.0 - q) / n)
        * al.powf((n * (mf + 1.0) + mf + 1.0 - q) / n)
        / r.powf(1.0 + mf)
        * kf.powf((n + q - 1.0 - mf) / n);
    let terms = vec![t("weyl", weyl_term(d, l, k)), t("c2 S_{m+3}", first), t("-S_{m+2}", second)];
    Ok(BoundResult::from_terms(id, k, terms).note(format!("a={a:.6e}, c1={c1:.6}, c2={c2:.6}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Domain;
    use crate::oracles::rectangle_spectrum;

    #[test]
    fn square_is_below_the_exact_sum() {
        let d = Domain::unit_square().derived();
        let exact: f64 = rectangle_spectrum(&[1.0, 1.0], 1, 100).unwrap().eigenvalues.iter().sum();
        for m in 0..=2 {
            let b = remark_f_bound(&d, 1, m, 100).unwrap();
            assert!(b.valid && b.value <= exact);
        }
    }

    #[test]
    fn m_zero_has_two_correction_terms_with_s3_and_s2() {
        let d = Domain::unit_disk().derived();
        let b = remark_f_bound(&d, 1, 0, 50).unwrap();
        assert_eq!(b.terms.len(), 3);
        assert!(b.term("c2 S_{m+3}").unwrap() > 0.0 && b.term("-S_{m+2}").unwrap() < 0.0);
    }

    #[test]
    fn c1_tends_to_a_constant() {
        let d = Domain::unit_square().derived();
        let lim = remark_c1_limit(2, 1, 0);
        assert!((lim - 1.0 / 6.0).abs() < 1e-15);
        let k = 1_000_000;
        let a = root_nonneg(2, q_of_k(&d, k as f64)).unwrap();
        assert!((remark_c1(&d, 1, 0, k, a) - lim).abs() < 1e-3);
    }

    #[test]
    fn n_below_m_is_invalid() {
        let d = Domain::unit_square().derived();
        assert!(!remark_f_bound(&d, 1, 3, 10).unwrap().valid);
    }
}
