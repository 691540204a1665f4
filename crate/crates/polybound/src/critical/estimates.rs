//! Closed-form lower estimates of the critical root, one per branch.
//!
//! Every branch is a Laurent polynomial in t̄ = (Q/(n+1))^{1/n} with rational
//! coefficients, so it can be evaluated both in floating point and exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{q_per_k_ball, root_n2, root_nonneg};
use crate::deep::highdim_root_thresholds;
use crate::error::{arg, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// n = 2, where the root has a closed form.
    N2Exact,
    /// n = 3: −1/2 + u − 1/(12u) + 1/(5184u⁵).
    N3,
    /// n = 4: −1/2 + t₁ − 1/(8t₁) + 3/(640t₁³) + 1/(600t₁⁶).
    N4,
    /// n = 5 remark formula.
    N5,
    /// n = 6 remark formula.
    N6,
    /// General n ≥ 5 estimate with the 99999/100000 factor.
    HighDim,
}

fn r(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::N2Exact => "n2_exact",
            Branch::N3 => "n3",
            Branch::N4 => "n4",
            Branch::N5 => "n5",
            Branch::N6 => "n6",
            Branch::HighDim => "highdim",
        }
    }

    /// Branches that apply to dimension n.
    pub fn for_dimension(n: usize) -> Vec<Branch> {
        match n {
            2 => vec![Branch::N2Exact],
            3 => vec![Branch::N3],
            4 => vec![Branch::N4],
            5 => vec![Branch::N5, Branch::HighDim],
            6 => vec![Branch::N6, Branch::HighDim],
            n if n >= 7 => vec![Branch::HighDim],
            _ => vec![],
        }
    }

    /// (power of t̄, coefficient) pairs. Not defined for the exact n = 2 branch.
    pub fn laurent_terms(self, n: usize) -> Vec<(i32, BigRational)> {
        let half = (0, r(-1, 2));
        let lead = (1, BigRational::one());
        match self {
            Branch::N2Exact => vec![],
            Branch::N3 => vec![half, lead, (-1, r(-1, 12)), (-5, r(1, 5184))],
            Branch::N4 => vec![half, lead, (-1, r(-1, 8)), (-3, r(3, 640)), (-6, r(1, 600))],
            Branch::N5 => vec![half, lead, (-1, r(-1, 6)), (-3, r(11, 720) * r(99999, 100000))],
            Branch::N6 => vec![half, lead, (-1, r(-5, 24)), (-3, r(13, 384)), (-5, r(-1, 222))],
            Branch::HighDim => {
                let m = n as i64;
                vec![
                    half,
                    lead,
                    (-1, r(-(m - 1), 24)),
                    (-3, r(99999, 100000) * r((m - 1) * (m - 3) * (2 * m + 1), 5760)),
                ]
            }
        }
    }

    /// Least Q at which the branch is claimed.
    pub fn q_threshold(self, n: usize) -> f64 {
        match self {
            Branch::N2Exact => 24.0,
            Branch::N3 => 210.0,
            Branch::N4 => 2275.0,
            Branch::N5 | Branch::N6 | Branch::HighDim => {
                let (k1, k2) = highdim_root_thresholds(n);
                let nf = n as f64;
                let k_thr = (0.5 * nf * k1.ln()).max(0.5 * nf * k2.ln()).exp();
                q_per_k_ball(n) * k_thr
            }
        }
    }

    /// Strictness of the threshold: n = 3 needs Q > 210, others Q ≥ threshold.
    pub fn holds_at(self, n: usize, q: f64) -> bool {
        match self {
            Branch::N3 => q > 210.0,
            _ => q >= self.q_threshold(n),
        }
    }

    pub fn eval(self, n: usize, tbar: f64) -> f64 {
        self.laurent_terms(n)
            .iter()
            .map(|(e, c)| rat_to_f64(c) * tbar.powi(*e))
            .sum()
    }

    pub fn eval_exact(self, n: usize, tbar: &BigRational) -> BigRational {
        let mut s = BigRational::zero();
        for (e, c) in self.laurent_terms(n) {
            let p = if e >= 0 { pow(tbar, e as u32) } else { pow(tbar, (-e) as u32).recip() };
            s += c * p;
        }
        s
    }
}

pub(crate) fn rat_to_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn pow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

/// Result of [`root_lower_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootEstimate {
    pub n: usize,
    pub q: f64,
    pub t_exact: f64,
    /// Best valid lower estimate, if any branch applies at this Q.
    pub t_lower: Option<f64>,
    pub branch: Option<Branch>,
    /// Every branch for this dimension with its value and whether its threshold holds.
    pub candidates: Vec<(Branch, f64, bool)>,
    /// Individual summands of the chosen branch, labelled by the power of t̄.
    pub correction_terms: Vec<(String, f64)>,
    pub note: Option<String>,
}

pub fn root_lower_estimate(n: usize, q: f64) -> Result<RootEstimate> {
    if n < 2 {
        return arg("root estimates need n >= 2");
    }
    if !(q > 1.0) {
        return arg(format!("no positive root for Q = {q}"));
    }
    let t_exact = root_nonneg(n, q)?;
    let tbar = (q / (n as f64 + 1.0)).powf(1.0 / n as f64);
    let mut candidates = Vec::new();
    for b in Branch::for_dimension(n) {
        let v = if b == Branch::N2Exact { root_n2(q) } else { b.eval(n, tbar) };
        candidates.push((b, v, b.holds_at(n, q)));
    }
    let best = candidates
        .iter()
        .filter(|c| c.2)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .copied();
    let (t_lower, branch, correction_terms, note) = match best {
        Some((b, v, _)) => {
            let terms = b
                .laurent_terms(n)
                .iter()
                .map(|(e, c)| (format!("tbar^{e}"), rat_to_f64(c) * tbar.powi(*e)))
                .collect();
            (Some(v), Some(b), terms, None)
        }
        None => (None, None, vec![], Some(format!("Q = {q} is below every branch threshold for n = {n}"))),
    };
    Ok(RootEstimate { n, q, t_exact, t_lower, branch, candidates, correction_terms, note })
}
