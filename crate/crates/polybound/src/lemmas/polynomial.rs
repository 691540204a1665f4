//! The two-variable polynomial inequality
//! d s^{d+q} ≥ (d+q)s^d τ^q − qτ^{d+q} + q Σ_{j=0}^m (j+1)s^j τ^{d+q−2−j}(s−τ)²
//! and the one-variable functions f, g used to prove it.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyParams {
    d: f64,
    q: f64,
    m: u32,
}

impl PolyParams {
    pub fn new(d: f64, q: f64, m: u32) -> Result<Self> {
        if !(d > 0.0 && d.is_finite()) {
            return arg(format!("d must be a positive real, got {d}"));
        }
        if !(q >= 2.0 && q.is_finite()) {
            return arg(format!("q must be >= 2, got {q}"));
        }
        if d + q < m as f64 + 2.0 {
            return arg(format!("needs d + q >= m + 2, got d={d}, q={q}, m={m}"));
        }
        Ok(PolyParams { d, q, m })
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn big_d(&self) -> f64 {
        self.d + self.q
    }

    /// d ≥ m + 1. Outside this range the residual is negative for small s/τ,
    /// since −(d+q)t^d then dominates q(m+2)t^{m+1}.
    pub fn small_t_safe(&self) -> bool {
        self.d >= self.m as f64 + 1.0
    }
}

fn positive(s: f64, tau: f64) -> Result<()> {
    if s > 0.0 && tau > 0.0 && s.is_finite() && tau.is_finite() {
        Ok(())
    } else {
        arg(format!("s and tau must be positive, got s={s}, tau={tau}"))
    }
}

/// Left minus right side, with the sum in closed form:
/// Σ_{j=0}^m (j+1)t^j(t−1)² = 1 − (m+2)t^{m+1} + (m+1)t^{m+2}.
/// Agrees with [`poly_residual_direct`] but avoids cancelling the qτ^{d+q}
/// terms against each other for small s.
pub fn poly_residual(p: &PolyParams, s: f64, tau: f64) -> Result<f64> {
    positive(s, tau)?;
    let (d, q, m) = (p.d, p.q, p.m as f64);
    let dd = p.big_d();
    Ok(d * s.powf(dd) - dd * s.powf(d) * tau.powf(q) + q * (m + 2.0) * s.powf(m + 1.0) * tau.powf(dd - m - 1.0)
        - q * (m + 1.0) * s.powf(m + 2.0) * tau.powf(dd - m - 2.0))
}

/// The residual evaluated term by term as displayed.
pub fn poly_residual_direct(p: &PolyParams, s: f64, tau: f64) -> Result<f64> {
    positive(s, tau)?;
    let dd = p.big_d();
    let sum: f64 = (0..=p.m)
        .map(|j| (j + 1) as f64 * s.powi(j as i32) * tau.powf(dd - 2.0 - j as f64) * (s - tau).powi(2))
        .sum();
    Ok(p.d * s.powf(dd) - (dd * s.powf(p.d) * tau.powf(p.q) - p.q * tau.powf(dd) + p.q * sum))
}

/// f(t) = d t^{d+q} − (d+q)t^d + q − q Σ_{j=0}^m (j+1)t^j(t−1)², term by term.
pub fn f_eval(p: &PolyParams, t: f64) -> Result<f64> {
    nonneg(t)?;
    let sum: f64 = (0..=p.m).map(|j| (j + 1) as f64 * t.powi(j as i32) * (t - 1.0).powi(2)).sum();
    Ok(p.d * t.powf(p.big_d()) - p.big_d() * t.powf(p.d) + p.q - p.q * sum)
}

/// Sum of |terms| of f, the natural scale for comparing two evaluations.
pub fn f_scale(p: &PolyParams, t: f64) -> f64 {
    let sum: f64 = (0..=p.m).map(|j| (j + 1) as f64 * t.powi(j as i32) * (t - 1.0).powi(2)).sum();
    p.d * t.powf(p.big_d()) + p.big_d() * t.powf(p.d) + p.q + p.q * sum
}

fn nonneg(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        arg(format!("t must be >= 0, got {t}"))
    }
}

/// g(t) = d t^{d+q−m−1} − (d+q)t^{d−m−1} − q(1+m)t + q(2+m), so that f = t^{m+1} g.
pub fn g_eval(p: &PolyParams, t: f64) -> Result<f64> {
    nonneg(t)?;
    let (d, q, m) = (p.d, p.q, p.m as f64);
    Ok(d * t.powf(p.big_d() - m - 1.0) - p.big_d() * t.powf(d - m - 1.0) - q * (1.0 + m) * t + q * (2.0 + m))
}

/// Sum of |terms| of g.
pub fn g_scale(p: &PolyParams, t: f64) -> f64 {
    let (d, q, m) = (p.d, p.q, p.m as f64);
    d * t.powf(p.big_d() - m - 1.0) + p.big_d() * t.powf(d - m - 1.0) + q * (1.0 + m) * t + q * (2.0 + m)
}

/// Analytic g'(t).
pub fn g_prime(p: &PolyParams, t: f64) -> f64 {
    let (d, q, m) = (p.d, p.q, p.m as f64);
    let e1 = p.big_d() - m - 1.0;
    let e2 = d - m - 1.0;
    d * e1 * t.powf(e1 - 1.0) - p.big_d() * e2 * t.powf(e2 - 1.0) - q * (1.0 + m)
}

/// The zero of g'' where it changes sign:
/// t₀ = ((d+q)(d−m−1)(d−m−2) / (d(d+q−m−1)(d+q−m−2)))^{1/q}.
///
/// Returns 0 when the numerator is not positive (d ∈ [m+1, m+2]; g is then
/// convex on all of (0, ∞)) and +∞ when d + q = m + 2 with a positive
/// numerator (g'' < 0 everywhere).
pub fn g_inflection(p: &PolyParams) -> f64 {
    let (d, q, m) = (p.d, p.q, p.m as f64);
    let num = p.big_d() * (d - m - 1.0) * (d - m - 2.0);
    let den = d * (p.big_d() - m - 1.0) * (p.big_d() - m - 2.0);
    if num <= 0.0 {
        0.0
    } else if den <= 0.0 {
        f64::INFINITY
    } else {
        (num / den).powf(1.0 / q)
    }
}

/// (1+u)^e − 2 + (1−u)^e without cancellation.
fn second_difference_unit(e: f64, u: f64) -> f64 {
    (e * u.ln_1p()).exp_m1() + (e * (-u).ln_1p()).exp_m1()
}

/// Central second difference of g at t with relative step u, one monomial at
/// a time (the linear and constant parts difference to zero), then one
/// Richardson step.
pub fn g_second_difference(p: &PolyParams, t: f64, u: f64) -> f64 {
    let (d, m) = (p.d, p.m as f64);
    let e1 = p.big_d() - m - 1.0;
    let e2 = d - m - 1.0;
    let at = |u: f64| {
        let h = u * t;
        (d * t.powf(e1) * second_difference_unit(e1, u) - p.big_d() * t.powf(e2) * second_difference_unit(e2, u)) / (h * h)
    };
    (4.0 * at(0.5 * u) - at(u)) / 3.0
}

/// Ridders' extrapolated central difference. Returns (derivative, error estimate).
pub fn ridders_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    const CON: f64 = 1.4;
    const CON2: f64 = CON * CON;
    const NTAB: usize = 10;
    let mut a = [[0.0f64; NTAB]; NTAB];
    let mut hh = h;
    a[0][0] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
    let mut best = (a[0][0], f64::INFINITY);
    for i in 1..NTAB {
        hh /= CON;
        a[0][i] = (f(x + hh) - f(x - hh)) / (2.0 * hh);
        let mut fac = CON2;
        for j in 1..=i {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= CON2;
            let err = (a[j][i] - a[j - 1][i]).abs().max((a[j][i] - a[j - 1][i - 1]).abs());
            if err <= best.1 {
                best = (a[j][i], err);
            }
        }
        if (a[i][i] - a[i - 1][i - 1]).abs() >= 2.0 * best.1 {
            break;
        }
    }
    best
}
