//! Dense symmetric eigenproblems by cyclic Jacobi rotations.

use crate::error::{arg, BoundError, Result};

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    a: Vec<f64>,
}

impl SymMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return arg("matrix must be square");
        }
        let a: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_flat(n, a)
    }

    pub fn from_flat(n: usize, a: Vec<f64>) -> Result<Self> {
        if a.len() != n * n {
            return arg("matrix data has the wrong length");
        }
        let scale = a.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            for j in 0..i {
                if (a[i * n + j] - a[j * n + i]).abs() > 1e-12 * scale {
                    return arg(format!("matrix is not symmetric at ({i},{j})"));
                }
            }
        }
        Ok(SymMatrix { n, a })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }
}

/// All eigenpairs, ascending. Column j of the returned row-major matrix is the
/// eigenvector for value j.
pub fn jacobi_eigen(m: &SymMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = m.n;
    let mut a = m.a.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tol = 1e-11 * norm.max(f64::MIN_POSITIVE);
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    let mut converged = off(&a) <= tol;
    for _sweep in 0..100 {
        if converged {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
        converged = off(&a) <= tol;
    }
    if !converged {
        return Err(BoundError::NonConvergence("Jacobi sweeps did not converge".into()));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let vals = idx.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in idx.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    Ok((vals, vecs))
}

/// The k smallest eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigen(m: &SymMatrix, k: usize) -> Result<Vec<f64>> {
    if k > m.n {
        return arg(format!("asked for {k} eigenvalues of a {}x{} matrix", m.n, m.n));
    }
    let (mut vals, _) = jacobi_eigen(m)?;
    vals.truncate(k);
    Ok(vals)
}
