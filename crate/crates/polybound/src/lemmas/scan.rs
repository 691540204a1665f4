//! Brute-force scans behind `verify-lemma`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polynomial::{
    f_eval, f_scale, g_eval, g_inflection, g_scale, g_second_difference, poly_residual, ridders_derivative, PolyParams,
};
use super::moment::{moment_brute_force, moment_exact_minimum, moment_lower_bound_variant, PsiConstraint};
use crate::deep::FifthExponent;
use crate::error::{BoundError, Result};

pub const POLY_TOLERANCE: f64 = 1e-9;
pub const CONVEXITY_TOLERANCE: f64 = 1e-8;
pub const STATIONARY_TOLERANCE: f64 = 1e-10;
pub const MOMENT_SLACK: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Coarse,
    Fine,
}

impl FromStr for Grid {
    type Err = BoundError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coarse" => Ok(Grid::Coarse),
            "fine" => Ok(Grid::Fine),
            other => Err(BoundError::Argument(format!("unknown grid {other:?}, expected coarse or fine"))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grid::Coarse => "coarse",
            Grid::Fine => "fine",
        })
    }
}

pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

/// d ∈ {2..10}, q ∈ {2, 2.5, …, 6}, m ∈ {0, …, ⌊d+q⌋ − 2}.
pub fn parameter_grid() -> Vec<PolyParams> {
    let mut out = Vec::new();
    for d in 2..=10 {
        for qi in 0..=8 {
            let q = 2.0 + 0.5 * qi as f64;
            let top = (d as f64 + q).floor() as u32 - 2;
            for m in 0..=top {
                out.push(PolyParams::new(d as f64, q, m).expect("grid parameters are admissible"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolyWitness {
    pub d: f64,
    pub q: f64,
    pub m: u32,
    pub s: f64,
    pub tau: f64,
    pub residual: f64,
    /// residual / max(1, d s^{d+q})
    pub normalised: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyScan {
    pub grid: Grid,
    pub seed: u64,
    pub cells: usize,
    pub evaluations: u64,
    pub violations: u64,
    pub violating_cells: usize,
    pub min_normalised: f64,
    pub argmin: PolyWitness,
    /// Same scan restricted to cells with d ≥ m + 1.
    pub min_normalised_d_ge_m_plus_1: f64,
    pub violations_d_ge_m_plus_1: u64,
    pub random_sets: usize,
    pub max_abs_g_at_1: f64,
    pub max_abs_g_prime_at_1: f64,
    pub max_factorisation_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

struct CellResult {
    evaluations: u64,
    violations: u64,
    worst: PolyWitness,
}

fn scan_cell(p: &PolyParams, pts: &[f64]) -> CellResult {
    let mut worst = PolyWitness { d: p.d(), q: p.q(), m: p.m(), s: 1.0, tau: 1.0, residual: 0.0, normalised: f64::INFINITY };
    let mut violations = 0;
    for &s in pts {
        for &tau in pts {
            let r = poly_residual(p, s, tau).expect("grid points are positive");
            let norm = r / (p.d() * s.powf(p.d() + p.q())).max(1.0);
            if norm < -POLY_TOLERANCE {
                violations += 1;
            }
            if norm < worst.normalised {
                worst = PolyWitness { s, tau, residual: r, normalised: norm, ..worst };
            }
        }
    }
    CellResult { evaluations: (pts.len() * pts.len()) as u64, violations, worst }
}

fn random_params(rng: &mut ChaCha8Rng) -> PolyParams {
    let d = rng.gen_range(2.0..10.0);
    let q = rng.gen_range(2.0..6.0);
    let m = rng.gen_range(0..=((d + q) as f64).floor() as u32 - 2);
    PolyParams::new(d, q, m).expect("sampled parameters are admissible")
}

/// Lemma scan over the parameter grid, plus g(1) = g′(1) = 0 and f = t^{m+1}g
/// on random parameter sets.
pub fn scan_polynomial(grid: Grid, seed: u64) -> PolyScan {
    let pts = logspace(1e-2, 1e2, if grid == Grid::Fine { 60 } else { 15 });
    let params = parameter_grid();
    let cells: Vec<CellResult> = params.par_iter().map(|p| scan_cell(p, &pts)).collect();

    let mut evaluations = 0;
    let mut violations = 0;
    let mut violating_cells = 0;
    let mut argmin: Option<PolyWitness> = None;
    let mut restricted_min = f64::INFINITY;
    let mut restricted_violations = 0;
    for (p, c) in params.iter().zip(&cells) {
        evaluations += c.evaluations;
        violations += c.violations;
        violating_cells += usize::from(c.violations > 0);
        if p.small_t_safe() {
            restricted_min = restricted_min.min(c.worst.normalised);
            restricted_violations += c.violations;
        }
        if argmin.map_or(true, |w| c.worst.normalised < w.normalised) {
            argmin = Some(c.worst);
        }
    }

    let random_sets = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut g1, mut gp1, mut fact) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..random_sets {
        let p = random_params(&mut rng);
        g1 = g1.max(g_eval(&p, 1.0).expect("t = 1").abs());
        let (dg, _) = ridders_derivative(|t| g_eval(&p, t).expect("t > 0"), 1.0, 0.1);
        gp1 = gp1.max(dg.abs());
        let t = rng.gen_range(0.01..3.0);
        let lhs = f_eval(&p, t).expect("t > 0");
        let rhs = t.powi(p.m() as i32 + 1) * g_eval(&p, t).expect("t > 0");
        fact = fact.max((lhs - rhs).abs() / f_scale(&p, t));
    }
    let argmin = argmin.expect("non-empty grid");
    PolyScan {
        grid,
        seed,
        cells: params.len(),
        evaluations,
        violations,
        violating_cells,
        min_normalised: argmin.normalised,
        argmin,
        min_normalised_d_ge_m_plus_1: restricted_min,
        violations_d_ge_m_plus_1: restricted_violations,
        random_sets,
        max_abs_g_at_1: g1,
        max_abs_g_prime_at_1: gp1,
        max_factorisation_error: fact,
        tolerance: POLY_TOLERANCE,
        passed: violations == 0 && g1 <= STATIONARY_TOLERANCE && gp1 <= STATIONARY_TOLERANCE && fact <= STATIONARY_TOLERANCE,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityWitness {
    pub d: f64,
    pub q: f64,
    pub m: u32,
    pub t0: f64,
    pub t: f64,
    /// second difference / (Σ|g terms| / t²)
    pub normalised: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityScan {
    pub grid: Grid,
    pub cells: usize,
    pub evaluations: u64,
    pub violations: u64,
    pub min_normalised: f64,
    pub argmin: ConvexityWitness,
    /// Cells where the sign change t₀ of g'' is not below 1.
    pub t0_not_below_one: usize,
    /// Cells where g'' never turns positive (d + q = m + 2 with d < m + 1).
    pub no_convex_region: usize,
    pub tolerance: f64,
    pub passed: bool,
}

/// Finite-difference convexity of g to the right of t₀ on the parameter grid.
pub fn scan_g_convexity(grid: Grid) -> ConvexityScan {
    let xs = logspace(1e-6, 1e2, if grid == Grid::Fine { 400 } else { 40 });
    let params = parameter_grid();
    let per_cell: Vec<(u64, u64, Option<ConvexityWitness>, f64)> = params
        .par_iter()
        .map(|p| {
            let t0 = g_inflection(p);
            if !t0.is_finite() {
                return (0, 0, None, t0);
            }
            let ts: Vec<f64> = if t0 > 0.0 {
                std::iter::once(t0).chain(xs.iter().map(|x| t0 * (1.0 + x))).collect()
            } else {
                xs.iter().map(|x| x * 1e2).filter(|t| *t >= 1e-4).collect()
            };
            let mut worst: Option<ConvexityWitness> = None;
            let mut bad = 0;
            for &t in &ts {
                let norm = g_second_difference(p, t, 1e-5) / (g_scale(p, t) / (t * t));
                if norm < -CONVEXITY_TOLERANCE {
                    bad += 1;
                }
                if worst.map_or(true, |w| norm < w.normalised) {
                    worst = Some(ConvexityWitness { d: p.d(), q: p.q(), m: p.m(), t0, t, normalised: norm });
                }
            }
            (ts.len() as u64, bad, worst, t0)
        })
        .collect();
    let mut evaluations = 0;
    let mut violations = 0;
    let mut argmin: Option<ConvexityWitness> = None;
    let mut t0_not_below_one = 0;
    let mut no_convex_region = 0;
    for (ev, bad, w, t0) in per_cell {
        evaluations += ev;
        violations += bad;
        if !t0.is_finite() {
            no_convex_region += 1;
        } else if t0 >= 1.0 {
            t0_not_below_one += 1;
        }
        if let Some(w) = w {
            if argmin.map_or(true, |a| w.normalised < a.normalised) {
                argmin = Some(w);
            }
        }
    }
    let argmin = argmin.expect("some cell has a convex region");
    ConvexityScan {
        grid,
        cells: params.len(),
        evaluations,
        violations,
        min_normalised: argmin.normalised,
        argmin,
        t0_not_below_one,
        no_convex_region,
        tolerance: CONVEXITY_TOLERANCE,
        passed: violations == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub n: usize,
    pub l: u32,
    pub rho: f64,
    pub a: f64,
    pub psi0: f64,
    pub normalised_moment: f64,
    pub printed: f64,
    pub derived: f64,
    pub exact_minimum: f64,
    pub brute_force: f64,
    /// printed / brute_force
    pub ratio: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentScan {
    pub grid: Grid,
    pub seed: u64,
    pub sets: usize,
    pub violations: usize,
    pub worst_ratio: f64,
    pub worst: MomentRow,
    /// Violations of the derived-exponent variant against the closed-form minimum.
    pub derived_violations: usize,
    pub derived_violations_n_ge_5: usize,
    pub slack: f64,
    pub rows: Vec<MomentRow>,
    pub passed: bool,
}

/// n ∈ [2, 12], l with 2l+n ∈ [6, 14], ψ₀ and ρ log-uniform on [0.1, 10], and
/// the normalised nA log-uniform on [1/(n+1), 10³].
pub fn random_constraint(rng: &mut ChaCha8Rng) -> PsiConstraint {
    let n = rng.gen_range(2..=12usize);
    let l_lo = (6usize.saturating_sub(n) + 1) / 2;
    let l_hi = (14 - n) / 2;
    let l = rng.gen_range(l_lo.max(1)..=l_hi) as u32;
    let psi0 = 10f64.powf(rng.gen_range(-1.0..1.0));
    let rho = 10f64.powf(rng.gen_range(-1.0..1.0));
    let lo = (1.0 / (n as f64 + 1.0)).ln();
    let na = rng.gen_range(lo..(1e3f64).ln()).exp();
    let c = psi0 / rho;
    let a = na * psi0 * c.powi(n as i32) / n as f64;
    PsiConstraint::new(n, l, rho, a, psi0).expect("sampled constraint is admissible")
}

/// The printed display against the discretised minimum for random constraint sets.
pub fn scan_moment_lemma(grid: Grid, sets: usize, seed: u64) -> Result<MomentScan> {
    let (cells, starts) = if grid == Grid::Fine { (400, 6) } else { (200, 3) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constraints: Vec<PsiConstraint> = (0..sets).map(|_| random_constraint(&mut rng)).collect();
    let rows: Vec<MomentRow> = constraints
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let bf = moment_brute_force(c, cells, starts, seed.wrapping_add(i as u64))?;
            let printed = moment_lower_bound_variant(c, FifthExponent::Printed);
            let ratio = printed / bf.value;
            Ok(MomentRow {
                n: c.n,
                l: c.l,
                rho: c.rho,
                a: c.a,
                psi0: c.psi0,
                normalised_moment: c.normalised_moment(),
                printed,
                derived: moment_lower_bound_variant(c, FifthExponent::Derived),
                exact_minimum: moment_exact_minimum(c)?,
                brute_force: bf.value,
                ratio,
                passed: printed <= bf.value * (1.0 + MOMENT_SLACK),
            })
        })
        .collect::<Result<_>>()?;
    let violations = rows.iter().filter(|r| !r.passed).count();
    let worst = rows
        .iter()
        .max_by(|a, b| a.ratio.total_cmp(&b.ratio))
        .cloned()
        .ok_or_else(|| BoundError::Argument("needs at least one constraint set".into()))?;
    let derived_bad = |r: &&MomentRow| r.derived > r.exact_minimum * (1.0 + 1e-12);
    Ok(MomentScan {
        grid,
        seed,
        sets,
        violations,
        worst_ratio: worst.ratio,
        worst,
        derived_violations: rows.iter().filter(derived_bad).count(),
        derived_violations_n_ge_5: rows.iter().filter(|r| r.n >= 5).filter(derived_bad).count(),
        slack: MOMENT_SLACK,
        passed: violations == 0,
        rows,
    })
}
