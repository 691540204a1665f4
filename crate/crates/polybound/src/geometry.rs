//! Domains and the geometric quantities the bounds are built from.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};

/// Γ(m/2) for a positive integer m, by the half-integer recurrence.
pub fn gamma_half(m: u32) -> f64 {
    assert!(m > 0, "gamma_half needs a positive argument");
    let (mut x, mut g) = if m % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
    while 2.0 * x < m as f64 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> Result<f64> {
    if n == 0 {
        return arg("unit ball volume needs n >= 1");
    }
    Ok(PI.powf(n as f64 / 2.0) / gamma_half(n as u32 + 2))
}

pub(crate) fn omega(n: usize) -> f64 {
    unit_ball_volume(n).expect("n >= 1")
}

/// Smallest centroidal inertia a domain of volume `v` can have (attained by the ball).
pub fn inertia_floor(n: usize, v: f64) -> f64 {
    let nf = n as f64;
    nf / (nf + 2.0) * v * (v / omega(n)).powf(2.0 / nf)
}

/// True when (n, V, I) respects the ball lower bound on the moment of inertia.
pub fn inertia_floor_holds(n: usize, v: f64, i: f64) -> bool {
    i >= inertia_floor(n, v) - 1e-12 * i
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Rectangle(Vec<f64>),
    Ball { radius: f64 },
    Explicit,
}

/// A bounded domain reduced to what the bounds need: dimension, volume and
/// moment of inertia about the centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    n: usize,
    shape: Shape,
    volume: f64,
    inertia: f64,
}

/// ω_n, α = V/(2π)^n and ρ = 2(2π)^{-n}√(VI), together with the raw V and I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    pub n: usize,
    pub volume: f64,
    pub inertia: f64,
    pub omega_n: f64,
    pub alpha: f64,
    pub rho: f64,
}

impl Domain {
    pub fn rectangle(sides: &[f64]) -> Result<Self> {
        if sides.len() < 2 {
            return arg("a rectangle needs at least two sides");
        }
        if sides.iter().any(|&a| !(a.is_finite() && a > 0.0)) {
            return arg("rectangle sides must be positive");
        }
        let volume: f64 = sides.iter().product();
        let inertia = volume * sides.iter().map(|a| a * a).sum::<f64>() / 12.0;
        Ok(Domain { n: sides.len(), shape: Shape::Rectangle(sides.to_vec()), volume, inertia })
    }

    pub fn ball(n: usize, radius: f64) -> Result<Self> {
        if n < 2 {
            return arg("a ball needs n >= 2");
        }
        if !(radius.is_finite() && radius > 0.0) {
            return arg("radius must be positive");
        }
        let w = omega(n);
        let nf = n as f64;
        Ok(Domain {
            n,
            shape: Shape::Ball { radius },
            volume: w * radius.powi(n as i32),
            inertia: nf * w * radius.powi(n as i32 + 2) / (nf + 2.0),
        })
    }

    /// A domain known only through V and I. Rejects data below the inertia floor.
    pub fn explicit(n: usize, volume: f64, inertia: f64) -> Result<Self> {
        if n < 2 {
            return arg("explicit domain needs n >= 2");
        }
        if !(volume > 0.0 && inertia > 0.0 && volume.is_finite() && inertia.is_finite()) {
            return arg("volume and inertia must be positive");
        }
        if !inertia_floor_holds(n, volume, inertia) {
            return arg(format!(
                "inertia {inertia} is below the floor {} for volume {volume} in dimension {n}",
                inertia_floor(n, volume)
            ));
        }
        Ok(Domain { n, shape: Shape::Explicit, volume, inertia })
    }

    pub fn unit_square() -> Self {
        Domain::rectangle(&[1.0, 1.0]).expect("valid")
    }

    pub fn unit_disk() -> Self {
        Domain::ball(2, 1.0).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn shape(&self) -> &Shape {
        &self.shape
    }
    pub fn volume(&self) -> f64 {
        self.volume
    }
    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn derived(&self) -> DerivedQuantities {
        let omega_n = omega(self.n);
        let two_pi_n = (2.0 * PI).powi(self.n as i32);
        DerivedQuantities {
            n: self.n,
            volume: self.volume,
            inertia: self.inertia,
            omega_n,
            alpha: self.volume / two_pi_n,
            rho: 2.0 * (self.volume * self.inertia).sqrt() / two_pi_n,
        }
    }

    pub fn inertia_floor_check(&self) -> bool {
        inertia_floor_holds(self.n, self.volume, self.inertia)
    }

    /// The same shape dilated by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return arg("scale factor must be positive");
        }
        match &self.shape {
            Shape::Rectangle(s) => Domain::rectangle(&s.iter().map(|a| a * c).collect::<Vec<_>>()),
            Shape::Ball { radius } => Domain::ball(self.n, radius * c),
            Shape::Explicit => Ok(Domain {
                n: self.n,
                shape: Shape::Explicit,
                volume: self.volume * c.powi(self.n as i32),
                inertia: self.inertia * c.powi(self.n as i32 + 2),
            }),
        }
    }
}

impl DerivedQuantities {
    /// Replacements used for the Stokes operator: α → (n−1)(2π)^{-n}V and
    /// ρ → (n(n−1))^{1/2}(2π)^{-n}I.
    pub fn stokes(&self) -> Self {
        let nf = self.n as f64;
        let two_pi_n = (2.0 * PI).powi(self.n as i32);
        DerivedQuantities {
            alpha: (nf - 1.0) * self.volume / two_pi_n,
            rho: (nf * (nf - 1.0)).sqrt() * self.inertia / two_pi_n,
            ..*self
        }
    }

    /// V as seen through α, i.e. (2π)^n α. Differs from `volume` after [`Self::stokes`].
    pub fn volume_eff(&self) -> f64 {
        (2.0 * PI).powi(self.n as i32) * self.alpha
    }

    /// I as seen through α and ρ, from ρ² = 4αI(2π)^{-n}.
    pub fn inertia_eff(&self) -> f64 {
        self.rho * self.rho * (2.0 * PI).powi(self.n as i32) / (4.0 * self.alpha)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }
}
