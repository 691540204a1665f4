//! Bessel functions of integer order, spherical Bessel functions and their zeros.

use std::f64::consts::PI;

use crate::error::{BoundError, Result};

const RESCALE: f64 = 1e250;

fn j_series(nu: usize, x: f64) -> f64 {
    let h = x / 2.0;
    let mut term = (1..=nu).fold(1.0, |t, j| t * h / j as f64);
    let mut sum = term;
    for m in 1..200 {
        term *= -h * h / (m as f64 * (m + nu) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// J_0(x), …, J_{nmax}(x): ascending series for small x, Miller's backward
/// recurrence normalised by J_0 + 2ΣJ_{2k} = 1 otherwise.
pub(crate) fn bessel_j_orders(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; nmax + 1];
        v[0] = 1.0;
        return v;
    }
    if x.abs() < 1.0 {
        return (0..=nmax).map(|nu| j_series(nu, x)).collect();
    }
    let top = nmax.max(x as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let mut out = vec![0.0; nmax + 1];
    let (mut jp, mut j) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let jm = 2.0 * k as f64 / x * j - jp;
        jp = j;
        j = jm;
        if k - 1 <= nmax {
            out[k - 1] = j;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j;
        }
        if j.abs() > RESCALE {
            j /= RESCALE;
            jp /= RESCALE;
            norm /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    norm += j;
    out.iter().map(|v| v / norm).collect()
}

/// J_ν(x) for integer ν ≥ 0.
pub fn bessel_j(nu: usize, x: f64) -> f64 {
    bessel_j_orders(nu, x)[nu]
}

fn j_and_derivative(nu: usize, x: f64) -> (f64, f64) {
    let v = bessel_j_orders(nu + 1, x);
    let d = if nu == 0 { -v[1] } else { v[nu - 1] - nu as f64 / x * v[nu] };
    (v[nu], d)
}

/// Spherical Bessel j_0(x), …, j_{mmax}(x) by backward recurrence normalised
/// against the closed forms of j_0 or j_1.
pub(crate) fn spherical_j_orders(mmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut v = vec![0.0; mmax + 1];
        v[0] = 1.0;
        return v;
    }
    let j0 = x.sin() / x;
    let j1 = x.sin() / (x * x) - x.cos() / x;
    let top = mmax.max(x as usize) + 1;
    let start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    let mut out = vec![0.0; mmax.max(1) + 1];
    let (mut jp, mut j) = (0.0f64, 1e-30f64);
    for m in (1..=start).rev() {
        // j_{m-1} = (2m+1)/x j_m − j_{m+1}
        let jm = (2 * m + 1) as f64 / x * j - jp;
        jp = j;
        j = jm;
        if m - 1 < out.len() {
            out[m - 1] = j;
        }
        if m < out.len() {
            out[m] = jp;
        }
        if j.abs() > RESCALE {
            j /= RESCALE;
            jp /= RESCALE;
            for v in out.iter_mut() {
                *v /= RESCALE;
            }
        }
    }
    let scale = if j0.abs() >= j1.abs() { j0 / out[0] } else { j1 / out[1] };
    out.truncate(mmax + 1);
    out.iter().map(|v| v * scale).collect()
}

/// Spherical Bessel function j_m(x).
pub fn spherical_j(m: usize, x: f64) -> f64 {
    spherical_j_orders(m, x)[m]
}

fn spherical_and_derivative(m: usize, x: f64) -> (f64, f64) {
    let v = spherical_j_orders(m + 1, x);
    let d = if m == 0 { -v[1] } else { v[m - 1] - (m + 1) as f64 / x * v[m] };
    (v[m], d)
}

#[derive(Clone, Copy)]
pub(crate) enum Family {
    Cylindrical,
    Spherical,
}

impl Family {
    fn eval(self, order: usize, x: f64) -> (f64, f64) {
        match self {
            Family::Cylindrical => j_and_derivative(order, x),
            Family::Spherical => spherical_and_derivative(order, x),
        }
    }

    /// Effective Bessel order ν (m + 1/2 for spherical functions).
    fn nu(self, order: usize) -> f64 {
        match self {
            Family::Cylindrical => order as f64,
            Family::Spherical => order as f64 + 0.5,
        }
    }
}

fn refine(f: Family, order: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut flo = f.eval(order, lo).0;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        let fm = f.eval(order, mid).0;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..60 {
        let (v, d) = f.eval(order, x);
        if d == 0.0 {
            break;
        }
        let step = v / d;
        let next = x - step;
        if !(lo - 1e-6..=hi + 1e-6).contains(&next) {
            return Err(BoundError::NonConvergence(format!(
                "Newton left the bracket for a zero of order {order}"
            )));
        }
        x = next;
        if step.abs() < 1e-15 * x {
            return Ok(x);
        }
    }
    let v = f.eval(order, x).0;
    if v.abs() < 1e-12 {
        Ok(x)
    } else {
        Err(BoundError::NonConvergence(format!("zero of order {order} near {x} did not converge")))
    }
}

/// All positive zeros below `xmax` of J_ν (cylindrical) or j_m (spherical).
pub(crate) fn zeros_below(f: Family, order: usize, xmax: f64) -> Result<Vec<f64>> {
    // no zero lies below ν; consecutive zeros are more than 2 apart
    let step = 0.5;
    let mut x = f.nu(order).max(1e-3);
    let mut fx = f.eval(order, x).0;
    let mut zeros = Vec::new();
    while x < xmax {
        let nx = (x + step).min(xmax);
        let fn_ = f.eval(order, nx).0;
        if fn_ == 0.0 {
            zeros.push(nx);
        } else if (fx < 0.0) != (fn_ < 0.0) && fx != 0.0 {
            zeros.push(refine(f, order, x, nx)?);
        }
        x = nx;
        fx = fn_;
    }
    Ok(zeros)
}

/// Zeros of J_ν below `xmax`.
pub fn bessel_zeros_below(nu: usize, xmax: f64) -> Result<Vec<f64>> {
    zeros_below(Family::Cylindrical, nu, xmax)
}

fn mcmahon(nu: f64, i: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let b = (i as f64 + nu / 2.0 - 0.25) * PI;
    b - (mu - 1.0) / (8.0 * b) - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * b).powi(3))
}

/// The i-th positive zero of J_ν. McMahon's expansion sizes the search window,
/// zeros are isolated by sign changes and polished by Newton.
pub fn bessel_zero(nu: usize, i: usize) -> Result<f64> {
    if i == 0 {
        return Err(BoundError::Argument("zero index starts at 1".into()));
    }
    let mut xmax = mcmahon(nu as f64, i).max(nu as f64) + 2.0 * PI;
    for _ in 0..40 {
        let z = bessel_zeros_below(nu, xmax)?;
        if z.len() >= i {
            return Ok(z[i - 1]);
        }
        xmax += PI * (i - z.len()) as f64 + PI;
    }
    Err(BoundError::NonConvergence(format!("could not bracket zero {i} of J_{nu}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_zeros() {
        assert!((bessel_zero(0, 1).unwrap() - 2.404825557695773).abs() < 1e-10);
        assert!((bessel_zero(1, 1).unwrap() - 3.831705970207512).abs() < 1e-10);
        assert!((bessel_zero(0, 2).unwrap() - 5.520078110286311).abs() < 1e-10);
        assert!((bessel_zero(5, 3).unwrap() - 15.70017407971167).abs() < 1e-10);
        assert!((bessel_zero(20, 1).unwrap() - 25.4171408140725).abs() < 1e-9);
        assert!(bessel_zero(0, 0).is_err());
    }

    #[test]
    fn series_and_recurrence_agree() {
        for nu in 0..6 {
            for &x in &[1.0, 2.5, 4.0, 7.0] {
                let a = j_series(nu, x);
                let b = bessel_j_orders(nu, 1.0000001 * x)[nu];
                assert!((a - b).abs() < 1e-5, "nu={nu} x={x}");
                let c = bessel_j_orders(nu + 3, x)[nu];
                assert!((a - c).abs() < 1e-12, "nu={nu} x={x}: {a} vs {c}");
            }
        }
    }

    #[test]
    fn spherical_closed_forms() {
        for &x in &[0.3f64, 1.0, 3.0, 10.0, 31.0] {
            let j0 = x.sin() / x;
            let j1 = x.sin() / (x * x) - x.cos() / x;
            let j2 = (3.0 / (x * x) - 1.0) * x.sin() / x - 3.0 * x.cos() / (x * x);
            let v = spherical_j_orders(2, x);
            assert!((v[0] - j0).abs() < 1e-13);
            assert!((v[1] - j1).abs() < 1e-13);
            assert!((v[2] - j2).abs() < 1e-12, "x={x}");
        }
        let z = zeros_below(Family::Spherical, 0, 10.0).unwrap();
        assert!((z[0] - PI).abs() < 1e-12);
        assert!((z[2] - 3.0 * PI).abs() < 1e-12);
    }
}
