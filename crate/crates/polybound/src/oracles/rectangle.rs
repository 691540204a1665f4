use std::f64::consts::PI;

use super::{Method, Spectrum};
use crate::error::{arg, BoundError, Result};

fn collect_below(inv_sq: &[f64], bound: f64, acc: f64, out: &mut Vec<f64>, cap: usize) -> bool {
    let Some((&w, rest)) = inv_sq.split_first() else {
        out.push(acc);
        return out.len() <= cap;
    };
    let mut m = 1u64;
    loop {
        let v = acc + PI * PI * (m * m) as f64 * w;
        // the remaining axes contribute at least π²/a² each
        let floor: f64 = rest.iter().map(|x| PI * PI * x).sum();
        if v + floor > bound {
            return true;
        }
        if !collect_below(rest, bound, v, out, cap) {
            return false;
        }
        m += 1;
    }
}

/// The k smallest Dirichlet Laplacian eigenvalues π²Σ m_i²/a_i² of a box.
pub fn rectangle_spectrum(sides: &[f64], l: u32, k: usize) -> Result<Spectrum> {
    if l != 1 {
        return Err(BoundError::Unsupported(format!(
            "closed-form box spectra are only available for l = 1 (got {l})"
        )));
    }
    if k == 0 {
        return arg("k must be at least 1");
    }
    if sides.is_empty() || sides.iter().any(|&a| !(a > 0.0 && a.is_finite())) {
        return arg("box sides must be positive");
    }
    let inv_sq: Vec<f64> = sides.iter().map(|a| 1.0 / (a * a)).collect();
    let mut bound = PI * PI * inv_sq.iter().sum::<f64>();
    // grow the search level until at least k eigenvalues lie below it; everything
    // below the level is enumerated, so the k smallest are exact
    let mut vals = Vec::new();
    loop {
        vals.clear();
        if collect_below(&inv_sq, bound, 0.0, &mut vals, usize::MAX) && vals.len() >= k {
            break;
        }
        bound *= 1.5;
    }
    vals.sort_by(f64::total_cmp);
    vals.truncate(k);
    Ok(Spectrum::exact(sides.len(), 1, vals, Method::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let s = rectangle_spectrum(&[1.0, 1.0], 1, 3).unwrap();
        let p2 = PI * PI;
        assert!((s.eigenvalues[0] - 2.0 * p2).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 5.0 * p2).abs() < 1e-12);
        assert!((s.eigenvalues[2] - 5.0 * p2).abs() < 1e-12);
        let s = rectangle_spectrum(&[1.0, 2.0], 1, 1).unwrap();
        assert!((s.eigenvalues[0] - p2 * 1.25).abs() < 1e-12);
        assert!(rectangle_spectrum(&[1.0, 1.0], 2, 3).is_err());
    }

    #[test]
    fn matches_brute_force_box() {
        // independent enumeration over a generous fixed box of indices
        let sides = [1.0, 1.7, 0.8];
        let mut all = Vec::new();
        for a in 1..40u32 {
            for b in 1..40u32 {
                for c in 1..40u32 {
                    let v = PI * PI
                        * ((a * a) as f64 / 1.0 + (b * b) as f64 / (1.7 * 1.7) + (c * c) as f64 / 0.64);
                    all.push(v);
                }
            }
        }
        all.sort_by(f64::total_cmp);
        let s = rectangle_spectrum(&sides, 1, 300).unwrap();
        for (x, y) in s.eigenvalues.iter().zip(&all) {
            assert!((x - y).abs() < 1e-9 * y);
        }
    }

    #[test]
    fn weyl_window() {
        let s = rectangle_spectrum(&[1.0, 1.0], 1, 500).unwrap();
        for k in 50..=500 {
            let r = s.eigenvalues[k - 1] / (4.0 * PI * k as f64);
            assert!((0.85..=1.3).contains(&r), "k={k} ratio {r}");
        }
    }
}
