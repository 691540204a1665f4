//! Dirichlet eigenvalues of the unit disk from Bessel zeros, checked against
//! a finite-difference square and the Pólya bound λ_j ≥ 4πj/|Ω|.

use std::f64::consts::PI;

use polybound::oracles::{ball_spectrum, fd_spectrum_extrapolated, rectangle_spectrum, FdScheme};

fn main() -> anyhow::Result<()> {
    let disk = ball_spectrum(2, 1.0, 20)?;
    println!("unit disk (bessel)");
    for (j, lam) in disk.eigenvalues.iter().enumerate() {
        let polya = 4.0 * (j + 1) as f64;
        println!("  λ_{:<2} = {lam:>10.5}   λ/(4j) = {:.4}", j + 1, lam / polya);
    }

    let exact = rectangle_spectrum(&[1.0, 1.0], 1, 10)?;
    let fd = fd_spectrum_extrapolated(&[1.0, 1.0], 1.0 / 12.0, 1, 10, FdScheme::DirichletPower)?;
    println!("unit square: exact vs finite differences (h = 1/12 and 1/24, one Richardson step)");
    for (j, (a, b)) in exact.eigenvalues.iter().zip(&fd.eigenvalues).enumerate() {
        println!("  λ_{:<2} = {a:>10.5}  fd {b:>10.5}  rel {:.1e}  (4πj = {:.3})", j + 1, (b - a).abs() / a, 4.0 * PI * (j + 1) as f64);
    }
    Ok(())
}
