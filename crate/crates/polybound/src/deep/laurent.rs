//! Exact Laurent polynomials in one variable (t̄) with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::critical::Branch;

pub(crate) fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Laurent {
    coeffs: BTreeMap<i32, BigRational>,
    /// Terms with exponent below this are discarded (None = exact).
    floor: Option<i32>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(e: i32, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms(terms: &[(i32, BigRational)]) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(*e, c.clone());
        }
        p
    }

    pub fn truncated(mut self, floor: i32) -> Self {
        self.floor = Some(floor);
        self.coeffs.retain(|e, _| *e >= floor);
        self
    }

    fn add_term(&mut self, e: i32, c: BigRational) {
        if self.floor.is_some_and(|f| e < f) || c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i32) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> {
        self.coeffs.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn top(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    fn floor_of(&self, other: &Self) -> Option<i32> {
        match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Self { coeffs: self.coeffs.clone(), floor: self.floor_of(other) };
        out.coeffs.retain(|e, _| out.floor.map_or(true, |f| *e >= f));
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self { coeffs: BTreeMap::new(), floor: self.floor };
        for (e, c) in &self.coeffs {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self { coeffs: BTreeMap::new(), floor: self.floor_of(other) };
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &other.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    pub fn shift(&self, by: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + by, c.clone())).collect(),
            floor: self.floor.map(|f| f + by),
        }
    }

    /// Truncation-aware powers, reusing the running product.
    pub fn powers(&self, up_to: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(up_to + 1);
        let mut cur = Self::constant(BigRational::one());
        cur.floor = self.floor;
        for _ in 0..=up_to {
            out.push(cur.clone());
            cur = cur.mul(self);
        }
        out
    }

    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        let mut s = BigRational::zero();
        for (e, c) in &self.coeffs {
            let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
            s += if *e >= 0 { c * p } else { c / p };
        }
        s
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().map(|(e, c)| super::rat_to_f64(c) * x.powi(*e)).sum()
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}{}*t^{e}", c.abs())?;
            first = false;
        }
        Ok(())
    }
}

/// (T+1)^M − T^M = Σ_{j<M} C(M,j) T^j.
pub fn power_difference(t: &Laurent, m: u32) -> Laurent {
    let pw = t.powers(m as usize);
    let mut c = BigInt::one();
    let mut out = Laurent::zero();
    out.floor = t.floor;
    for (j, p) in pw.iter().enumerate().take(m as usize) {
        out = out.add(&p.scale(&BigRational::from_integer(c.clone())));
        c = c * BigInt::from(m as usize - j) / BigInt::from(j + 1);
    }
    out
}

/// Exact bracket (t+1)^M − t^M for the n = 2 closed-form root, as a polynomial
/// in t̄ (only even powers), using y = t + 1/2 and y² = t̄² − 1/12.
pub fn n2_bracket(m: u32) -> Laurent {
    let z = Laurent::from_terms(&[(2, BigRational::one()), (0, rat(-1, 12))]);
    let zp = z.powers(m as usize / 2);
    let mut out = Laurent::zero();
    // (y+1/2)^M − (y−1/2)^M = 2 Σ_{j odd} C(M,j) 2^{−j} y^{M−j}
    let mut c = BigInt::one();
    for j in 0..=m {
        if j % 2 == 1 {
            let coeff = BigRational::new(c.clone() * 2, BigInt::from(2).pow(j));
            out = out.add(&zp[((m - j) / 2) as usize].scale(&coeff));
        }
        c = c * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    out
}

/// Bracket of a root-estimate branch: (t_lower + 1)^M − t_lower^M exactly.
pub fn branch_bracket(branch: Branch, n: usize, m: u32) -> Laurent {
    match branch {
        Branch::N2Exact => n2_bracket(m),
        b => power_difference(&Laurent::from_terms(&b.laurent_terms(n)), m),
    }
}

/// Asymptotic series of the exact root of (t+1)^{n+1} − t^{n+1} = (n+1)t̄^n,
/// correct through t̄^{floor}.
pub fn root_series(n: usize, floor: i32) -> Laurent {
    let m = n as u32 + 1;
    // P(y) = (y+1/2)^m − (y−1/2)^m with t = y − 1/2
    let mut p_coeffs = Vec::new();
    let mut c = BigInt::one();
    for j in 0..=m {
        if j % 2 == 1 {
            p_coeffs.push(((m - j) as i32, BigRational::new(c.clone() * 2, BigInt::from(2).pow(j))));
        }
        c = c * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    // the residual is divided by n(n+1)t̄^{n−1}; keep enough headroom for that shift
    let work_floor = floor + n as i32 - 2;
    let target = Laurent::monomial(n as i32, BigRational::from_integer(BigInt::from(m))).truncated(work_floor);
    let inv_lead = BigRational::new(BigInt::one(), BigInt::from(n * (n + 1)));
    let mut y = Laurent::monomial(1, BigRational::one()).truncated(floor);
    for _ in 0..(2 - floor) as usize + 2 {
        // a term dropped below floor − m cannot climb back above floor in y^m
        let pw = y.clone().truncated(floor - m as i32).powers(m as usize);
        let mut p = Laurent::zero().truncated(work_floor);
        for (deg, cf) in &p_coeffs {
            p = p.add(&pw[*deg as usize].scale(cf));
        }
        let resid = p.sub(&target);
        let step = resid.scale(&inv_lead).shift(-(n as i32 - 1)).truncated(floor);
        if step.coeffs.is_empty() {
            break;
        }
        y = y.sub(&step);
    }
    y.add(&Laurent::constant(rat(-1, 2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_l2_bracket_is_seven_seven_minus_one_27th() {
        let b = n2_bracket(7);
        assert_eq!(b.coeff(6), rat(7, 1));
        assert_eq!(b.coeff(4), rat(7, 1));
        assert_eq!(b.coeff(2), rat(0, 1));
        assert_eq!(b.coeff(0), rat(-1, 27));
    }

    #[test]
    fn power_difference_matches_float() {
        let t = Laurent::from_terms(&[(1, rat(1, 1)), (0, rat(-1, 2)), (-1, rat(-1, 12))]);
        let p = power_difference(&t, 6);
        let x = 3.7f64;
        let tv = x - 0.5 - 1.0 / (12.0 * x);
        assert!((p.eval(x) - ((tv + 1.0).powi(6) - tv.powi(6))).abs() < 1e-9);
    }

    #[test]
    fn root_series_known_terms() {
        let s = root_series(3, -5);
        assert_eq!(s.coeff(1), rat(1, 1));
        assert_eq!(s.coeff(0), rat(-1, 2));
        assert_eq!(s.coeff(-1), rat(-1, 12));
        assert_eq!(s.coeff(-2), rat(0, 1));
        let s = root_series(7, -3);
        assert_eq!(s.coeff(-1), rat(-6, 24));
        // numerically close to the root for a large t̄
        let tb = 40.0f64;
        let q = 8.0 * tb.powi(7);
        let t = crate::critical::solve_root(7, q).unwrap();
        assert!((s.eval(tb) - t).abs() < 1e-6);
    }
}
