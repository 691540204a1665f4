//! The displayed lower bounds, evaluated term by term exactly as printed
//! (up to the exponent corrections listed in the README's audit section).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::thresholds::thresholds;
use crate::classical::{weyl_term, BoundResult};
use crate::critical::{master_at, master_bound, q_of_k, root_lower_estimate};
use crate::error::{arg, Result};
use crate::geometry::DerivedQuantities;

/// One summand of a displayed bound together with the constant printed in front of it.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplayTerm {
    pub label: String,
    pub constant: String,
    /// Numeric value of `constant`.
    pub coeff: f64,
    pub value: f64,
}

fn dt(label: &str, constant: impl Into<String>, coeff: f64, value: f64) -> DisplayTerm {
    DisplayTerm { label: label.into(), constant: constant.into(), coeff, value }
}

/// Which theorem applies to (n, l).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Planar,
    Spatial,
    FourDim,
    HighDim,
}

impl Theorem {
    pub fn id(self) -> &'static str {
        match self {
            Theorem::Planar => "thm_n2",
            Theorem::Spatial => "thm_n3",
            Theorem::FourDim => "thm_n4",
            Theorem::HighDim => "thm_highdim",
        }
    }

    pub fn for_dimension(n: usize) -> Option<Self> {
        match n {
            2 => Some(Theorem::Planar),
            3 => Some(Theorem::Spatial),
            4 => Some(Theorem::FourDim),
            n if n >= 5 => Some(Theorem::HighDim),
            _ => None,
        }
    }
}

/// Summands of the displayed bound for the dimension of `d`; None when no
/// display exists for (n, l).
pub fn display_terms(d: &DerivedQuantities, l: u32, k: u64) -> Option<Vec<DisplayTerm>> {
    let kf = k as f64;
    let (v, i, w, a, r) = (d.volume_eff(), d.inertia_eff(), d.omega_n, d.alpha, d.rho);
    let lf = l as f64;
    let tp = 2.0 * PI;
    let terms = match (d.n, l) {
        (2, 1) => return None,
        (2, 2) => vec![
            dt("k^3", "1/3", 1.0 / 3.0, (tp * tp / v).powi(2) * kf.powi(3) / (3.0 * w * w)),
            dt("k^2", "pi/3", PI / 3.0, PI / (3.0 * i) * kf * kf),
            dt("k^0", "1/145252", 1.0 / 145252.0, -v.powi(4) / i.powi(3) / 145252.0),
        ],
        (2, _) => {
            let vi = v * i;
            let c1 = 1.0 / (lf + 1.0);
            let c2 = lf / 12.0;
            let c21 = (48.0 * lf * lf + 4.0 * lf - 11.0) * lf / (2304.0 * (lf + 1.0));
            let c22 = 8.0 * lf * (3.0 * lf + 1.0) * (lf - 1.0) / 649.0;
            let c23 = (2.0 * lf + 1.0) * lf * (lf - 1.0) * (lf - 2.0) / 486.0;
            vec![
                dt("k^(l+1)", "1/(l+1)", c1, c1 * a.powf(-lf) * kf.powf(lf + 1.0) / w.powf(lf)),
                dt("k^l", "l/12", c2, c2 * tp.powi(4) * a.powf(3.0 - lf) * kf.powf(lf) / (w.powf(lf - 1.0) * vi)),
                dt(
                    "k^(l-1)",
                    "(48l^2+4l-11)l/(2304(l+1))",
                    c21,
                    -c21 / w.powf(lf - 2.0) * tp.powi(8) * a.powf(6.0 - lf) * kf.powf(lf - 1.0) / vi.powi(2),
                ),
                dt("k^(l-2)", "8l(3l+1)(l-1)/649", c22, c22 * PI.powi(12) * a.powf(9.0 - lf) * kf.powf(lf - 2.0) / vi.powi(3)),
                dt(
                    "k^(l-3)",
                    "(2l+1)l(l-1)(l-2)/486",
                    c23,
                    -c23 / w.powf(lf - 4.0) * PI.powi(16) * a.powf(12.0 - lf) * kf.powf(lf - 3.0) / vi.powi(4),
                ),
            ]
        }
        (3, 1) => vec![
            dt("k^(5/3)", "3/5", 0.6, 0.6 * (tp.powi(3) / (w * v)).powf(2.0 / 3.0) * kf.powf(5.0 / 3.0)),
            dt("k^1", "1/16", 1.0 / 16.0, v / i * kf / 16.0),
            dt(
                "k^(1/3)",
                "11/3840",
                11.0 / 3840.0,
                -11.0 / 3840.0 * (w.cbrt() / tp).powi(2) * (v.powf(4.0 / 3.0) / i).powi(2) * kf.cbrt(),
            ),
            dt(
                "k^(-1/3)",
                "659/6400000",
                659.0 / 6.4e6,
                659.0 / 6.4e6 * (w.powi(4) / 4.0).cbrt() * v.powf(13.0 / 3.0) / (tp.powi(4) * i.powi(3)) / kf.cbrt(),
            ),
        ],
        (3, 2) => vec![
            dt("k^(7/3)", "3/7", 3.0 / 7.0, 3.0 / 7.0 * (tp.powi(3) / (w * v)).powf(4.0 / 3.0) * kf.powf(7.0 / 3.0)),
            dt("k^(5/3)", "pi^2/2", PI * PI / 2.0, PI * PI / (2.0 * w.powf(2.0 / 3.0)) * v.cbrt() / i * kf.powf(5.0 / 3.0)),
            dt("k^1", "1/256", 1.0 / 256.0, -(v / i).powi(2) * kf / 256.0),
            dt("k^(1/3)", "23/580608", 23.0 / 580608.0, 23.0 / 580608.0 * v.powf(11.0 / 3.0) / (tp * tp * i.powi(3)) * kf.cbrt()),
        ],
        (3, _) => {
            let e = |num: f64| num / 3.0;
            let c1 = 3.0 / (2.0 * lf + 3.0);
            let c2 = 4.0 * lf;
            let c3 = (lf + 1.0).powi(2) / 2.0;
            let c4 = (3.0 * lf - 2.0) * (2.0 * lf + 1.0) * (lf + 1.0) / 24.0;
            let c5 = (2.0 * lf + 1.0) * (2.0 * lf - 1.0) * (lf + 1.0) / 24.0;
            vec![
                dt("k^((2l+3)/3)", "3/(2l+3)", c1, c1 / w.powf(e(2.0 * lf)) * a.powf(-e(2.0 * lf)) * kf.powf(e(2.0 * lf + 3.0))),
                dt(
                    "k^((2l+1)/3)",
                    "4l",
                    c2,
                    c2 * PI.powi(6) / (v * i * w.powf(e(2.0 * lf - 2.0))) * a.powf(e(8.0 - 2.0 * lf)) * kf.powf(e(2.0 * lf + 1.0)),
                ),
                dt(
                    "k^(2l/3)",
                    "(l+1)^2/2",
                    c3,
                    -c3 / (w.powf(e(2.0 * lf - 3.0)) * r.powi(3)) * a.powf(e(12.0 - 2.0 * lf)) * kf.powf(e(2.0 * lf)),
                ),
                dt(
                    "k^((2l-1)/3)",
                    "(3l-2)(2l+1)(l+1)/24",
                    c4,
                    c4 / (w.powf(e(2.0 * lf - 4.0)) * r.powi(4)) * a.powf(e(16.0 - 2.0 * lf)) * kf.powf(e(2.0 * lf - 1.0)),
                ),
                dt(
                    "k^((2l-2)/3)",
                    "(2l+1)(2l-1)(l+1)/24",
                    c5,
                    -c5 / (w.powf(e(2.0 * lf - 5.0)) * r.powi(5)) * a.powf(e(20.0 - 2.0 * lf)) * kf.powf(e(2.0 * lf - 2.0)),
                ),
            ]
        }
        (4, 1) => vec![
            dt("k^(3/2)", "2/3", 2.0 / 3.0, 2.0 / (3.0 * w.sqrt()) * (tp.powi(4) / v).sqrt() * kf.powf(1.5)),
            dt("k^1", "1/12", 1.0 / 12.0, v / i * kf / 12.0),
            dt("k^(1/2)", "7/960", 7.0 / 960.0, -7.0 * w.sqrt() / (960.0 * tp * tp) * v.powf(2.5) / (i * i) * kf.sqrt()),
            dt("k^0", "47/114688", 47.0 / 114688.0, 47.0 * w / (114688.0 * tp.powi(4)) * v.powi(4) / i.powi(3)),
            dt("k^(-1/4)", "1/150", 1.0 / 150.0, w.powf(1.25) / (150.0 * r.powi(7)) * a.powf(33.0 / 4.0) * kf.powf(-0.25)),
            dt("k^(-1/2)", "449/122880", 449.0 / 122880.0, -449.0 / 122880.0 * w.powf(1.5) / r.powi(8) * a.powf(9.5) / kf.sqrt()),
        ],
        (4, 2) => vec![
            dt("k^2", "1/2", 0.5, tp.powi(4) / (2.0 * w * v) * kf * kf),
            dt("k^(3/2)", "pi^2/12", PI * PI / 12.0, PI * PI / (12.0 * w.sqrt()) * v.sqrt() / i * kf.powf(1.5)),
            dt("k^1", "1/80", 1.0 / 80.0, -(v / i).powi(2) * kf / 80.0),
            dt("k^(1/2)", "61/1280", 61.0 / 1280.0, 61.0 * w.sqrt() / (1280.0 * r.powi(6)) * a.powf(6.5) * kf.sqrt()),
            dt("k^(1/4)", "1/150", 1.0 / 150.0, w.powf(0.75) / (150.0 * r.powi(7)) * a.powf(31.0 / 4.0) * kf.powf(0.25)),
            dt("k^0", "17423/1843200", 17423.0 / 1843200.0, -17423.0 * w / (1843200.0 * r.powi(8)) * a.powi(9)),
            dt("k^(-1/4)", "7/1200", 7.0 / 1200.0, 7.0 * w.powf(1.25) / (1200.0 * r.powi(9)) * a.powf(41.0 / 4.0) * kf.powf(-0.25)),
        ],
        (4, _) => {
            let c1 = 2.0 / (lf + 2.0);
            let c2 = lf / 12.0;
            let c3 = 128.0 * (4.0 * lf + 7.0) * (2.0 * lf + 1.0) / 3.0;
            let c4 = (2.0 * lf + 3.0) * (2.0 * lf - 1.0) * (lf + 1.0) / 12.0;
            let c5 = (2.0 * lf + 3.0) * (2.0 * lf + 1.0) * (lf + 1.0) * lf / 18.0;
            vec![
                dt("k^((l+2)/2)", "2/(l+2)", c1, c1 / w.powf(lf / 2.0) * a.powf(-lf / 2.0) * kf.powf((lf + 2.0) / 2.0)),
                dt(
                    "k^((l+1)/2)",
                    "l/12",
                    c2,
                    c2 * tp.powi(8) / (w.powf((lf - 1.0) / 2.0) * v * i) * a.powf((5.0 - lf) / 2.0) * kf.powf((lf + 1.0) / 2.0),
                ),
                dt(
                    "k^((2l+1)/4)",
                    "128(4l+7)(2l+1)/3",
                    c3,
                    -c3 * PI.powi(12) / (w.powf((2.0 * lf - 3.0) / 4.0) * (v * i).powf(1.5))
                        * a.powf((15.0 - 2.0 * lf) / 4.0)
                        * kf.powf((2.0 * lf + 1.0) / 4.0),
                ),
                dt(
                    "k^(l/2)",
                    "(2l+3)(2l-1)(l+1)/12",
                    c4,
                    c4 / (w.powf((lf - 2.0) / 2.0) * r.powi(4)) * a.powf((10.0 - lf) / 2.0) * kf.powf(lf / 2.0),
                ),
                dt(
                    "k^((2l-1)/4)",
                    "(2l+3)(2l+1)(l+1)l/18",
                    c5,
                    -c5 / (w.powf((2.0 * lf - 5.0) / 4.0) * r.powi(5)) * a.powf((25.0 - 2.0 * lf) / 4.0) * kf.powf((2.0 * lf - 1.0) / 4.0),
                ),
            ]
        }
        (n, _) if n >= 5 => {
            let nf = n as f64;
            let big_n = 2.0 * lf + nf;
            let c = [
                nf * lf / 12.0,
                nf * (12.0 * lf + 7.0 * nf - 13.0) * (big_n - 1.0) / 48.0,
                nf * (2.0 * lf + 2.0 * nf - 3.0) * (big_n - 1.0) * (big_n - 2.0) / 96.0,
                nf * (big_n - 1.0) * (big_n - 2.0) * (big_n - 3.0) * (big_n - 4.0) / 288.0,
            ];
            let texts = ["nl/12", "n(12l+7n-13)(N-1)/48", "n(2l+2n-3)(N-1)(N-2)/96", "n(N-1)(N-2)(N-3)(N-4)/288"];
            let signs = [1.0, -1.0, 1.0, -1.0];
            let mut out = vec![dt("weyl", "n/(n+2l)", nf / big_n, weyl_term(d, l, k))];
            for j in 0..4 {
                let p = j as f64 + 2.0;
                let val = signs[j] * c[j] / r.powf(p) * w.powf(-(2.0 * lf - p) / nf) * a.powf((p * nf + p - 2.0 * lf) / nf)
                    * kf.powf((big_n - p) / nf);
                out.push(dt(&format!("k^((N-{})/n)", j + 2), texts[j], c[j], val));
            }
            out
        }
        _ => return None,
    };
    Some(terms)
}

fn from_display(id: &str, k: u64, terms: Vec<DisplayTerm>) -> BoundResult {
    BoundResult::from_terms(id, k, terms.into_iter().map(|t| (t.label, t.value)).collect())
}

fn gated(id: &str, d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if k == 0 {
        return arg("k must be >= 1");
    }
    let Some(terms) = display_terms(d, l, k) else {
        return Ok(BoundResult::from_terms(id, k, vec![]).invalid(format!("no displayed bound for n={}, l={l}", d.n)));
    };
    let res = from_display(id, k, terms);
    let th = thresholds(d.n, l)?;
    if th.admits(k) {
        Ok(res)
    } else {
        let note = format!("k={k} below threshold exp({:.6})", th.ln_k_required());
        Ok(res.invalid(note))
    }
}

fn expect_dim(id: &str, d: &DerivedQuantities, ok: bool, k: u64) -> Option<BoundResult> {
    (!ok).then(|| BoundResult::from_terms(id, k, vec![]).invalid(format!("{id} does not apply to n={}", d.n)))
}

pub fn thm_n2(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if let Some(r) = expect_dim("thm_n2", d, d.n == 2, k) {
        return Ok(r);
    }
    gated("thm_n2", d, l, k)
}

pub fn thm_n3(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if let Some(r) = expect_dim("thm_n3", d, d.n == 3, k) {
        return Ok(r);
    }
    gated("thm_n3", d, l, k)
}

pub fn thm_n4(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if let Some(r) = expect_dim("thm_n4", d, d.n == 4, k) {
        return Ok(r);
    }
    gated("thm_n4", d, l, k)
}

pub fn thm_highdim(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if let Some(r) = expect_dim("thm_highdim", d, d.n >= 5, k) {
        return Ok(r);
    }
    gated("thm_highdim", d, l, k)
}

/// Dimension-dispatched theorem (thm_n2 / thm_n3 / thm_n4 / thm_highdim).
pub fn thm_for(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    match Theorem::for_dimension(d.n) {
        Some(t) => gated(t.id(), d, l, k),
        None => arg("theorems need n >= 2"),
    }
}

/// Exponent of k in the fifth summand of the unrestricted bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FifthExponent {
    /// (2l+n−5)/n, the slot the expansion produces.
    #[default]
    Derived,
    /// (2l+n−6)/n as printed.
    Printed,
}

pub fn thm_unrestricted(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    thm_unrestricted_variant(d, l, k, FifthExponent::Derived)
}

pub fn thm_unrestricted_variant(d: &DerivedQuantities, l: u32, k: u64, fifth: FifthExponent) -> Result<BoundResult> {
    if k == 0 {
        return arg("k must be >= 1");
    }
    let id = "thm_unrestricted";
    let nf = d.nf();
    let lf = l as f64;
    let big_n = 2.0 * lf + nf;
    if big_n < 6.0 {
        return Ok(BoundResult::from_terms(id, k, vec![]).invalid(format!("needs 2l+n >= 6, got {big_n}")));
    }
    let (w, a, r) = (d.omega_n, d.alpha, d.rho);
    let kw = k as f64 / w;
    let tail = |p: f64, c: f64, kexp: f64| c * lf * w * a.powf((p * nf - 2.0 * lf + p) / nf) / (big_n * r.powf(p)) * kw.powf(kexp / nf);
    let fifth_exp = match fifth {
        FifthExponent::Derived => big_n - 5.0,
        FifthExponent::Printed => big_n - 6.0,
    };
    let terms = vec![
        ("weyl".to_string(), weyl_term(d, l, k)),
        ("k^((N-2)/n)".to_string(), tail(2.0, 5.0 / 2.0, big_n - 2.0)),
        ("k^((N-3)/n)".to_string(), -tail(3.0, 31.0 / 9.0, big_n - 3.0)),
        ("k^((N-4)/n)".to_string(), tail(4.0, 5.0 / 8.0, big_n - 4.0)),
        ("k^((N-5)/n)".to_string(), tail(5.0, 38.0 / 25.0, fifth_exp)),
        ("k^((N-6)/n)".to_string(), -tail(6.0, 317.0 / 420.0, big_n - 6.0)),
    ];
    let res = BoundResult::from_terms(id, k, terms);
    Ok(match fifth {
        FifthExponent::Derived => res,
        FifthExponent::Printed => res.note("fifth exponent as printed"),
    })
}

/// Σ a_m(−Δ)^m with m running over r+1, r+2, …
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositeOperator {
    pub r: u32,
    /// a_{r+1}, a_{r+2}, …
    pub coefficients: Vec<f64>,
}

impl CompositeOperator {
    pub fn new(r: u32, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.iter().any(|a| !(*a >= 0.0 && a.is_finite())) {
            return arg("composite coefficients must be finite and non-negative");
        }
        if !coefficients.iter().any(|a| *a > 0.0) {
            return arg("composite operator needs at least one positive coefficient");
        }
        Ok(Self { r, coefficients })
    }

    pub fn orders(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.coefficients.iter().enumerate().map(|(i, a)| (self.r + 1 + i as u32, *a))
    }
}

/// Σ_m a_m · master_bound(m): per-order minima added up.
pub fn generalized_polya(op: &CompositeOperator, d: &DerivedQuantities, k: u64) -> Result<BoundResult> {
    let mut terms = Vec::new();
    for (m, a) in op.orders() {
        if a > 0.0 {
            terms.push((format!("order_{m}"), a * master_bound(d, m, k)?.value));
        }
    }
    Ok(BoundResult::from_terms("generalized_polya", k, terms))
}

/// The l = 1 master bound after the Stokes substitution of α and ρ.
pub fn stokes_bound(d: &DerivedQuantities, k: u64) -> Result<BoundResult> {
    if d.n < 2 {
        return arg("stokes bound needs n >= 2");
    }
    let s = d.stokes();
    if k == 0 {
        return arg("k must be >= 1");
    }
    // the substituted ρ is not scale covariant, so small domains can push Q below 1
    let q = q_of_k(&s, k as f64);
    if q < 1.0 {
        return Ok(BoundResult::from_terms("stokes", k, vec![]).invalid(format!("substituted Q={q:.6e} < 1")));
    }
    let m = master_bound(&s, 1, k)?;
    Ok(BoundResult::from_terms("stokes", k, m.terms).note(format!("alpha={:.6e}, rho={:.6e}", s.alpha, s.rho)))
}

/// Master expression at the branch lower estimate of the root, i.e. the
/// quantity each theorem expands. Invalid when no branch applies.
pub fn recomputed_bound(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if k == 0 {
        return arg("k must be >= 1");
    }
    let q = q_of_k(d, k as f64);
    let est = root_lower_estimate(d.n, q)?;
    let res = BoundResult::from_terms("recomputed", k, vec![]);
    Ok(match (est.t_lower, est.branch) {
        (Some(t), Some(b)) if t >= 0.0 => {
            BoundResult::from_terms("recomputed", k, vec![("master_at_t_lower".into(), master_at(d, l, t))]).note(b.as_str())
        }
        _ => res.invalid(est.note.unwrap_or_else(|| "no branch applies".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{li_yau, melas};
    use crate::geometry::Domain;
    use crate::oracles::ball_spectrum;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn planar_l2_example() {
        let d = Domain::unit_square().derived();
        let b = thm_n2(&d, 2, 1).unwrap();
        let expect = 16.0 * PI.powi(4) / (3.0 * PI * PI) + PI / 0.5 - 216.0 / 145252.0;
        assert!(rel(b.value, expect) < 1e-12);
        assert!(!thm_n2(&d, 1, 5).unwrap().valid);
        assert!(!thm_n2(&d, 3, 1).unwrap().valid);
    }

    #[test]
    fn leading_terms_are_weyl() {
        let doms = [Domain::unit_square(), Domain::ball(3, 1.3).unwrap(), Domain::rectangle(&[1.0, 2.0, 1.0, 0.5]).unwrap()];
        for dom in doms {
            let d = dom.derived();
            for l in 1..6 {
                if let Some(t) = display_terms(&d, l, 37) {
                    assert!(rel(t[0].value, weyl_term(&d, l, 37)) < 1e-12, "n={} l={l}", d.n);
                }
            }
        }
        for n in 5..9 {
            let d = Domain::ball(n, 1.0).unwrap().derived();
            let t = display_terms(&d, 2, 100).unwrap();
            assert!(rel(t[0].value, weyl_term(&d, 2, 100)) < 1e-12);
        }
        let d = Domain::ball(4, 1.0).unwrap().derived();
        let u = thm_unrestricted(&d, 1, 1).unwrap();
        assert_eq!(u.terms.len(), 6);
        assert!(rel(u.terms[0].1, li_yau(&d, 1).value) < 1e-12);
    }

    #[test]
    fn spatial_l1_on_ball() {
        let d = Domain::ball(3, 1.0).unwrap().derived();
        let b = thm_n3(&d, 1, 1).unwrap();
        assert!(b.valid && b.value <= PI * PI);
        let eig = ball_spectrum(3, 1.0, 100).unwrap().partial_sums();
        for k in 1..=100 {
            let v = thm_n3(&d, 1, k).unwrap().value;
            assert!(v <= eig[k as usize - 1]);
            assert!(v >= melas(&d, k).value, "k={k}");
        }
        let labels: Vec<_> = thm_n3(&d, 2, 4).unwrap().terms.into_iter().map(|t| t.0).collect();
        assert_eq!(labels, ["k^(7/3)", "k^(5/3)", "k^1", "k^(1/3)"]);
    }

    #[test]
    fn fourdim_tends_to_li_yau() {
        let d = Domain::ball(4, 1.0).unwrap().derived();
        let k = 10_000_000_000u64;
        let r = thm_n4(&d, 1, k).unwrap().value / li_yau(&d, k).value;
        assert!(r > 1.0 && r - 1.0 < 1e-3);
        assert!(thm_n4(&d, 3, 10_000).unwrap().valid);
    }

    #[test]
    fn highdim_gate_and_relaxation() {
        let d = Domain::ball(5, 1.0).unwrap().derived();
        let th = thresholds(5, 1).unwrap();
        let k = th.k_required().ceil() as u64;
        let b = thm_highdim(&d, 1, k).unwrap();
        assert!(b.valid && b.terms.len() == 5);
        assert!(!thm_highdim(&d, 1, k / 2).unwrap().valid);
        assert!(b.value <= master_bound(&d, 1, k).unwrap().value);
        assert!(!thm_highdim(&Domain::unit_square().derived(), 1, 5).unwrap().valid);
    }

    #[test]
    fn unrestricted_variants() {
        let d = Domain::unit_square().derived();
        assert!(!thm_unrestricted(&d, 1, 3).unwrap().valid);
        let a = thm_unrestricted(&d, 2, 10).unwrap();
        let b = thm_unrestricted_variant(&d, 2, 10, FifthExponent::Printed).unwrap();
        assert!(a.valid && b.valid);
        let ratio = a.terms[4].1 / b.terms[4].1;
        assert!(rel(ratio, (10.0 / d.omega_n).powf(0.5)) < 1e-12);
    }

    #[test]
    fn polya_composition() {
        let d = Domain::unit_square().derived();
        let one = generalized_polya(&CompositeOperator::new(0, vec![0.0, 1.0]).unwrap(), &d, 5).unwrap();
        assert!(rel(one.value, master_bound(&d, 2, 5).unwrap().value) < 1e-14);
        let two = generalized_polya(&CompositeOperator::new(0, vec![1.0, 1.0]).unwrap(), &d, 5).unwrap();
        let sum = master_bound(&d, 1, 5).unwrap().value + master_bound(&d, 2, 5).unwrap().value;
        assert!(rel(two.value, sum) < 1e-14);
        let scaled = generalized_polya(&CompositeOperator::new(0, vec![3.0, 3.0]).unwrap(), &d, 5).unwrap();
        assert!(rel(scaled.value, 3.0 * sum) < 1e-14);
        assert!(CompositeOperator::new(0, vec![0.0]).is_err());
    }

    #[test]
    fn stokes_and_recomputed() {
        let d = Domain::unit_square().derived();
        let s = stokes_bound(&d, 10).unwrap();
        assert_eq!(s.bound_id, "stokes");
        assert!((d.stokes().alpha / d.alpha - 1.0).abs() < 1e-14);
        let r = recomputed_bound(&d, 1, 10).unwrap();
        assert!(r.valid && rel(r.value, master_bound(&d, 1, 10).unwrap().value) < 1e-9);
        let d4 = Domain::ball(4, 1.0).unwrap().derived();
        let r = recomputed_bound(&d4, 2, 30).unwrap();
        assert!(r.valid && r.value <= master_bound(&d4, 2, 30).unwrap().value);
    }
}
