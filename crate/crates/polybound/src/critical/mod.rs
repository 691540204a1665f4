//! The critical equation (t+1)^{n+1} − t^{n+1} = Q, its lower estimates, the
//! master inequality built on its root, and the extremal profile Φ_s.

mod estimates;
mod profile;

use crate::classical::{t, BoundResult};
use crate::error::{arg, BoundError, Result};
use crate::geometry::{omega, DerivedQuantities};

pub use estimates::{root_lower_estimate, Branch, RootEstimate};
pub(crate) use estimates::rat_to_f64;
pub use profile::{
    minimise_profile, profile_moment, rearrangement_min_check, ExtremalProfile, MassRule, ProfileMinimum,
    ProfileProblem, RearrangementCheck,
};

/// S_j(t) = (t+1)^j − t^j for integer j, summed from the binomial expansion so
/// no cancellation occurs for large t.
pub fn power_difference_int(j: u32, t: f64) -> f64 {
    let mut c = 1.0;
    let mut tp = 1.0;
    let mut s = 0.0;
    for i in 0..j {
        s += c * tp;
        c = c * (j - i) as f64 / (i + 1) as f64;
        tp *= t;
    }
    s
}

/// S_p(t) = (t+1)^p − t^p for real p ≥ 1 and t ≥ 0.
pub fn power_difference(p: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    t.powf(p) * (p * (1.0 / t).ln_1p()).exp_m1()
}

/// ln S_p(t), usable when S_p itself would overflow.
pub fn ln_power_difference(p: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    p * t.ln() + (p * (1.0 / t).ln_1p()).exp_m1().ln()
}

fn p_and_dp(n: usize, t: f64) -> (f64, f64) {
    let m = n as u32 + 1;
    let mut c = 1.0;
    let mut tp = 1.0;
    let (mut p, mut dp) = (0.0, 0.0);
    for i in 0..m {
        p += c * tp;
        if i + 1 < m {
            // derivative term from the next power: C(m, i+1)(i+1)t^i
            let c_next = c * (m - i) as f64 / (i + 1) as f64;
            dp += c_next * (i + 1) as f64 * tp;
        }
        c = c * (m - i) as f64 / (i + 1) as f64;
        tp *= t;
    }
    (p, dp)
}

/// Root of the critical equation for Q ≥ 1 (t = 0 at Q = 1).
pub(crate) fn root_nonneg(n: usize, q: f64) -> Result<f64> {
    if n < 1 {
        return arg("critical equation needs n >= 1");
    }
    if !(q >= 1.0 && q.is_finite()) {
        return arg(format!("critical equation needs Q >= 1, got {q}"));
    }
    if q == 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, (q / (n as f64 + 1.0)).powf(1.0 / n as f64));
    // (n+1)t^n ≤ Q brackets from above; guard the rounding in the power
    while p_and_dp(n, hi).0 < q {
        hi *= 1.0 + 1e-12;
    }
    while hi - lo > 1e-6 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if p_and_dp(n, mid).0 < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (p, dp) = p_and_dp(n, x);
        let step = (p - q) / dp;
        let next = (x - step).clamp(lo, hi);
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.max(1e-300) {
            return Ok(next);
        }
        x = next;
    }
    let (p, _) = p_and_dp(n, x);
    if (p - q).abs() <= 1e-12 * q {
        Ok(x)
    } else {
        Err(BoundError::NonConvergence(format!("Newton polish for n={n}, Q={q}")))
    }
}

/// Positive root of (t+1)^{n+1} − t^{n+1} = Q. Requires Q > 1 and n ≥ 2.
pub fn solve_root(n: usize, q: f64) -> Result<f64> {
    if n < 2 {
        return arg("solve_root needs n >= 2");
    }
    if !(q > 1.0) {
        return arg(format!("no positive root for Q = {q} <= 1"));
    }
    root_nonneg(n, q)
}

/// Closed-form root for n = 2.
pub fn root_n2(q: f64) -> f64 {
    (q / 3.0 - 1.0 / 12.0).sqrt() - 0.5
}

/// Q = (n+1)ρ^n k / (α^{n+1} ω_n).
pub fn q_of_k(d: &DerivedQuantities, k: f64) -> f64 {
    let n = d.nf();
    ((n + 1.0).ln() + n * d.rho.ln() + k.ln() - (n + 1.0) * d.alpha.ln() - d.omega_n.ln()).exp()
}

/// Q/k for the ball, the least value over all domains of dimension n.
pub fn q_per_k_ball(n: usize) -> f64 {
    let nf = n as f64;
    let w = omega(n);
    ((nf + 1.0).ln() + nf * (4.0 * std::f64::consts::PI).ln() + 0.5 * nf * (nf / (nf + 2.0)).ln() - 2.0 * w.ln()).exp()
}

/// ln of nω α^{N+1} / (N(N+1) ρ^N), N = 2l+n.
pub(crate) fn ln_master_prefactor(d: &DerivedQuantities, l: u32) -> f64 {
    let big_n = 2.0 * l as f64 + d.nf();
    (d.nf() * d.omega_n).ln() + (big_n + 1.0) * d.alpha.ln() - big_n * d.rho.ln() - (big_n * (big_n + 1.0)).ln()
}

/// t̄ = (Q/(n+1))^{1/n} = ρ (k/ω)^{1/n} α^{−(n+1)/n}.
pub fn t_bar(d: &DerivedQuantities, k: f64) -> f64 {
    (q_of_k(d, k) / (d.nf() + 1.0)).powf(1.0 / d.nf())
}

/// Prefactor · c · t̄^e, the contribution of one term c·t̄^e of the bracket
/// (t+1)^{N+1} − t^{N+1} to the master inequality.
pub fn bracket_term(d: &DerivedQuantities, l: u32, k: f64, c: f64, e: f64) -> f64 {
    c * (ln_master_prefactor(d, l) + e * t_bar(d, k).ln()).exp()
}

/// The key inequality with the exact root; every theorem relaxes this value.
pub fn master_bound(d: &DerivedQuantities, l: u32, k: u64) -> Result<BoundResult> {
    if k == 0 {
        return arg("k must be >= 1");
    }
    let q = q_of_k(d, k as f64);
    let root = root_nonneg(d.n, q)?;
    let big_n = 2.0 * l as f64 + d.nf();
    let v = (ln_master_prefactor(d, l) + ln_power_difference(big_n + 1.0, root)).exp();
    Ok(BoundResult::from_terms("master", k, vec![t("master", v)]).note(format!("Q={q:.6e}, t={root:.6e}")))
}

/// Master expression evaluated at a supplied t instead of the exact root.
pub fn master_at(d: &DerivedQuantities, l: u32, root: f64) -> f64 {
    let big_n = 2.0 * l as f64 + d.nf();
    (ln_master_prefactor(d, l) + ln_power_difference(big_n + 1.0, root)).exp()
}
