use super::bessel::{zeros_below, Family};
use super::{Method, Spectrum};
use crate::error::{arg, BoundError, Result};

/// Every eigenvalue (j/R)² ≤ level with its multiplicity, or None when more
/// than `cap` are found.
fn eigen_below(family: Family, radius: f64, level: f64, cap: usize) -> Result<Option<Vec<f64>>> {
    let xmax = level.sqrt() * radius;
    let mut out = Vec::new();
    for order in 0.. {
        // the first zero of order ν exceeds ν, so once ν passes xmax nothing is left
        if order as f64 >= xmax {
            break;
        }
        let zs = zeros_below(family, order, xmax)?;
        if zs.is_empty() {
            break;
        }
        let mult = match family {
            Family::Cylindrical => {
                if order == 0 {
                    1
                } else {
                    2
                }
            }
            Family::Spherical => 2 * order + 1,
        };
        for z in zs {
            let v = (z / radius).powi(2);
            out.extend(std::iter::repeat(v).take(mult));
        }
        if out.len() > cap {
            return Ok(None);
        }
    }
    Ok(Some(out))
}

/// The k smallest Dirichlet Laplacian eigenvalues of a disk (n = 2) or ball (n = 3).
pub fn ball_spectrum(n: usize, radius: f64, k: usize) -> Result<Spectrum> {
    let family = match n {
        2 => Family::Cylindrical,
        3 => Family::Spherical,
        _ => return Err(BoundError::Unsupported(format!("ball spectra need n = 2 or 3, got {n}"))),
    };
    if k == 0 {
        return arg("k must be at least 1");
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return arg("radius must be positive");
    }
    let mut level = (2.0 / radius).powi(2);
    let mut vals = loop {
        match eigen_below(family, radius, level, 8 * k + 64)? {
            Some(v) if v.len() >= k => break v,
            Some(_) => level *= 1.6,
            None => level *= 0.8,
        }
    };
    vals.sort_by(f64::total_cmp);
    vals.truncate(k);
    Ok(Spectrum::exact(n, 1, vals, Method::Bessel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_first_values() {
        let s = ball_spectrum(2, 1.0, 3).unwrap();
        let j01 = 2.404825557695773f64;
        let j11 = 3.831705970207512f64;
        assert!((s.eigenvalues[0] - j01 * j01).abs() < 1e-9);
        assert!((s.eigenvalues[1] - j11 * j11).abs() < 1e-9);
        assert!((s.eigenvalues[2] - j11 * j11).abs() < 1e-9);
    }

    #[test]
    fn ball_first_value() {
        let s = ball_spectrum(3, 1.0, 4).unwrap();
        assert!((s.eigenvalues[0] - PI * PI).abs() < 1e-9);
        // next is the threefold j_1 zero 4.4934…
        let z = 4.493409457909064f64;
        for v in &s.eigenvalues[1..4] {
            assert!((v - z * z).abs() < 1e-8);
        }
    }

    #[test]
    fn radius_scaling() {
        let a = ball_spectrum(2, 1.0, 30).unwrap();
        let b = ball_spectrum(2, 2.0, 30).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - 4.0 * y).abs() < 1e-9 * x);
        }
        assert!(ball_spectrum(4, 1.0, 1).is_err());
    }
}
