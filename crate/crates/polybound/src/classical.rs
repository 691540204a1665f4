//! Earlier lower bounds for Σ_{i≤k} λ_i^{(l)}, used as baselines.
//!
//! Formulas are written through α, ρ and ω_n (with V = (2π)^n α and I recovered
//! from ρ), so a substituted [`DerivedQuantities`] flows through every term.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::geometry::{gamma_half, DerivedQuantities};

/// One evaluated bound. `value` is the sum of `terms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub bound_id: String,
    pub k: u64,
    pub value: f64,
    pub terms: Vec<(String, f64)>,
    pub valid: bool,
    pub threshold_note: Option<String>,
}

impl BoundResult {
    pub(crate) fn from_terms(bound_id: &str, k: u64, terms: Vec<(String, f64)>) -> Self {
        let value = terms.iter().map(|(_, v)| v).sum();
        BoundResult { bound_id: bound_id.to_string(), k, value, terms, valid: true, threshold_note: None }
    }

    pub(crate) fn invalid(mut self, note: impl Into<String>) -> Self {
        self.valid = false;
        self.threshold_note = Some(note.into());
        self
    }

    pub(crate) fn note(mut self, note: impl Into<String>) -> Self {
        self.threshold_note = Some(note.into());
        self
    }

    pub fn term(&self, label: &str) -> Option<f64> {
        self.terms.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }
}

pub(crate) fn t(label: &str, v: f64) -> (String, f64) {
    (label.to_string(), v)
}

/// Ilyin's constants β_n^L for n = 2, 3, 4.
pub fn ilyin_beta(n: usize) -> Option<f64> {
    match n {
        2 => Some(119.0 / 120.0),
        3 => Some(0.986),
        4 => Some(0.978),
        _ => None,
    }
}

/// (n/(n+2l))·(2π)^{2l}/(ω_n V)^{2l/n}·k^{(2l+n)/n}, the Weyl-type leading term.
pub fn weyl_term(d: &DerivedQuantities, l: u32, k: u64) -> f64 {
    let n = d.nf();
    let q = 2.0 * l as f64;
    n / (n + q) * (d.omega_n * d.alpha).powf(-q / n) * (k as f64).powf((q + n) / n)
}

fn melas_term(d: &DerivedQuantities, k: u64) -> f64 {
    d.volume_eff() / d.inertia_eff() * k as f64 / (24.0 * (d.nf() + 2.0))
}

pub fn li_yau(d: &DerivedQuantities, k: u64) -> BoundResult {
    BoundResult::from_terms("li_yau", k, vec![t("weyl", weyl_term(d, 1, k))])
}

pub fn melas(d: &DerivedQuantities, k: u64) -> BoundResult {
    BoundResult::from_terms("melas", k, vec![t("weyl", weyl_term(d, 1, k)), t("melas", melas_term(d, k))])
}

pub fn ilyin(d: &DerivedQuantities, k: u64) -> BoundResult {
    let beta = ilyin_beta(d.n);
    let corr = beta.unwrap_or(1.0) * d.nf() / 48.0 * d.volume_eff() / d.inertia_eff() * k as f64;
    let r = BoundResult::from_terms("ilyin", k, vec![t("weyl", weyl_term(d, 1, k)), t("ilyin", corr)]);
    match beta {
        Some(_) => r,
        None => r.invalid("ilyin holds for n in {2,3,4}; beta set to 1 for diagnostics"),
    }
}

/// The additional term of Yıldırım Yolcu and Yolcu.
pub fn yildirim_yolcu_term(d: &DerivedQuantities, k: u64) -> f64 {
    let n = d.nf();
    let (v, i) = (d.volume_eff(), d.inertia_eff());
    v.powf((3.0 * n + 2.0) / (2.0 * n)) / (144.0 * (n + 2.0) * i.powf(1.5) * gamma_half(d.n as u32 + 2).powf(1.0 / n))
        * (k as f64).powf(1.0 - 1.0 / n)
}

/// Melas plus the Yıldırım Yolcu–Yolcu term.
pub fn yy(d: &DerivedQuantities, k: u64) -> BoundResult {
    let r = BoundResult::from_terms(
        "yy",
        k,
        vec![t("weyl", weyl_term(d, 1, k)), t("melas", melas_term(d, k)), t("yy", yildirim_yolcu_term(d, k))],
    );
    if d.n < 2 {
        r.invalid("needs n >= 2")
    } else {
        r
    }
}

pub fn jx_l1(d: &DerivedQuantities, k: u64) -> BoundResult {
    let n = d.nf();
    let third = d.omega_n.powf(-1.0 / n) * d.alpha.powf((3.0 * n + 1.0) / n) / (9.0 * (n + 2.0) * d.rho.powi(3))
        * (k as f64).powf((n - 1.0) / n);
    BoundResult::from_terms(
        "jx_l1",
        k,
        vec![t("weyl", weyl_term(d, 1, k)), t("melas", melas_term(d, k)), t("jx", third)],
    )
}

pub fn levine_protter(d: &DerivedQuantities, k: u64) -> BoundResult {
    BoundResult::from_terms("levine_protter", k, vec![t("weyl", weyl_term(d, 2, k))])
}

/// Levine–Protter plus the α_n correction. `alpha_n` must lie in (0, 1).
pub fn cswz(d: &DerivedQuantities, k: u64, alpha_n: f64) -> Result<BoundResult> {
    if !(alpha_n > 0.0 && alpha_n < 1.0) {
        return arg(format!("cswz needs alpha_n in (0,1), got {alpha_n}"));
    }
    let n = d.nf();
    let corr = alpha_n * n / 24.0 * d.volume_eff() / d.inertia_eff() * (2.0 * PI).powi(2)
        / (d.volume_eff() * d.omega_n).powf(2.0 / n)
        * (k as f64).powf((n + 2.0) / n);
    let r = BoundResult::from_terms("cswz", k, vec![t("weyl", weyl_term(d, 2, k)), t("cswz", corr)]);
    Ok(if (2..=4).contains(&d.n) { r } else { r.invalid("cswz holds for n in {2,3,4}") })
}

pub fn jx_l2(d: &DerivedQuantities, k: u64) -> BoundResult {
    let n = d.nf();
    let (w, a, r, kf) = (d.omega_n, d.alpha, d.rho, k as f64);
    let t2 = w.powf(-2.0 / n) * a.powf((2.0 * n - 2.0) / n) / (3.0 * (n + 4.0) * r * r) * kf.powf((n + 2.0) / n);
    let t3 = 2.0 * w.powf(-1.0 / n) * a.powf((3.0 * n - 1.0) / n) / (9.0 * (n + 4.0) * r.powi(3)) * kf.powf((n + 1.0) / n);
    let t4 = 3.0 * a.powi(4) / (40.0 * (n + 4.0) * r.powi(4)) * kf;
    let res = BoundResult::from_terms("jx_l2", k, vec![t("weyl", weyl_term(d, 2, k)), t("t2", t2), t("t3", t3), t("t4", t4)]);
    if d.n < 3 {
        res.invalid("jx_l2 holds for n >= 3")
    } else {
        res
    }
}

/// Cheng–Qi–Wei, reported as a sum (the average bound times k).
pub fn cqw(d: &DerivedQuantities, l: u32, k: u64) -> BoundResult {
    let n = d.nf();
    let kf = k as f64;
    let ratio = d.volume_eff() / d.inertia_eff();
    let wv = d.omega_n * d.volume_eff();
    let mut terms = vec![t("weyl", weyl_term(d, l, k))];
    let mut denom = 1.0;
    for p in 1..=l {
        denom *= 24.0 * (n + 2.0 * (p as f64 - 1.0));
        let e = (l - p) as f64;
        let c = (2.0 * PI).powf(2.0 * e) * (e + 1.0) / (denom * wv.powf(2.0 * e / n));
        let avg = n / (n + 2.0 * l as f64) * c * ratio.powi(p as i32) * kf.powf(2.0 * e / n);
        terms.push((format!("p{p}"), avg * kf));
    }
    BoundResult::from_terms("cqw", k, terms)
}
