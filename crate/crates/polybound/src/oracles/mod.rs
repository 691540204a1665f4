//! Reference spectra: closed forms where they exist, finite differences elsewhere.

mod ball;
mod bessel;
mod fd;
mod jacobi;
mod rectangle;

use serde::{Deserialize, Serialize};

pub use ball::ball_spectrum;
pub use bessel::{bessel_j, bessel_zero, bessel_zeros_below, spherical_j};
pub use fd::{fd_spectrum, fd_spectrum_extrapolated, FdScheme, GridDomain};
pub use jacobi::{jacobi_eigen, symmetric_eigen, SymMatrix};
pub use rectangle::rectangle_spectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Bessel,
    FiniteDifference,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Bessel => "bessel",
            Method::FiniteDifference => "finite_difference",
        }
    }
}

/// Ascending eigenvalues of (−Δ)^l on one domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    pub l: u32,
    pub eigenvalues: Vec<f64>,
    pub method: Method,
    /// Relative error estimate per eigenvalue; zero for exact spectra,
    /// NaN when a single grid gives no estimate.
    pub error_estimate: Vec<f64>,
}

impl Spectrum {
    pub fn exact(n: usize, l: u32, eigenvalues: Vec<f64>, method: Method) -> Self {
        let error_estimate = vec![0.0; eigenvalues.len()];
        Spectrum { n, l, eigenvalues, method, error_estimate }
    }

    /// Running sums λ_1 + … + λ_k for k = 1..len.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Two-grid extrapolation `(2^p λ_{h/2} − λ_h)/(2^p − 1)`; the second value is |λ_{h/2} − λ_h|.
pub fn richardson_extrapolate(lam_h: f64, lam_h2: f64, order: u32) -> (f64, f64) {
    let f = 2f64.powi(order as i32);
    ((f * lam_h2 - lam_h) / (f - 1.0), (lam_h2 - lam_h).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_arithmetic() {
        assert_eq!(richardson_extrapolate(4.0, 4.0, 2), (4.0, 0.0));
        let (v, e) = richardson_extrapolate(20.0, 19.8, 2);
        assert!((v - 19.733333333333333).abs() < 1e-12);
        assert!((e - 0.2).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_accumulate() {
        let s = Spectrum::exact(2, 1, vec![1.0, 2.0, 4.0], Method::ClosedForm);
        assert_eq!(s.partial_sums(), vec![1.0, 3.0, 7.0]);
    }
}
