//! The extremal profile Φ_s and a discretised moment-minimisation oracle.
//!
//! A decreasing profile Ψ on [0, R] with Ψ(R) = 0 is described by its slopes
//! q_j = −Ψ′ on uniform cells. Then Ψ(0) = Σ q_j Δ and
//! ∫ r^γ Ψ dr = Σ q_j c_{γ,j} with c_{γ,j} = ∫_{cell j} s^{γ+1}/(γ+1) ds,
//! so minimising a higher moment at a fixed lower one is a linear program in q.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::power_difference;
use crate::error::{arg, BoundError, Result};

/// Φ_s: height M on [0, s], then slope −L down to zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalProfile {
    pub m: f64,
    pub l: f64,
    pub s: f64,
}

impl ExtremalProfile {
    pub fn new(m: f64, l: f64, s: f64) -> Result<Self> {
        if !(m > 0.0 && l > 0.0 && s >= 0.0 && m.is_finite() && l.is_finite() && s.is_finite()) {
            return arg("extremal profile needs M, L > 0 and s >= 0");
        }
        Ok(ExtremalProfile { m, l, s })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= self.s {
            self.m
        } else {
            (self.m - self.l * (r - self.s)).max(0.0)
        }
    }

    pub fn support_end(&self) -> f64 {
        self.s + self.m / self.l
    }
}

/// ∫₀^∞ r^γ Φ_s dr = M^{γ+2}/((γ+1)(γ+2)L^{γ+1}) · S_{γ+2}(sL/M).
pub fn profile_moment(p: &ExtremalProfile, gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return arg("moment exponent must be >= 0");
    }
    let t = p.s * p.l / p.m;
    Ok(p.m.powf(gamma + 2.0) / ((gamma + 1.0) * (gamma + 2.0) * p.l.powf(gamma + 1.0)) * power_difference(gamma + 2.0, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRule {
    /// 0 ≤ Ψ ≤ mass.
    AtMost,
    /// Ψ(0) = mass.
    Exactly,
}

/// Minimise ∫ r^{high_exp} Ψ subject to ∫ r^{low_exp} Ψ = low_target,
/// slope in [−cap, 0] and the mass rule on Ψ(0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileProblem {
    pub cells: usize,
    pub window: f64,
    pub cap: f64,
    pub mass: f64,
    pub rule: MassRule,
    pub low_exp: f64,
    pub low_target: f64,
    pub high_exp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMinimum {
    pub value: f64,
    pub low_moment: f64,
    pub psi0: f64,
    pub slopes: Vec<f64>,
    pub starts: usize,
}

struct Lp {
    ca: Vec<f64>,
    cb: Vec<f64>,
    dx: f64,
    cap: f64,
    mass: f64,
    rule: MassRule,
    target: f64,
}

fn cell_weights(cells: usize, dx: f64, gamma: f64) -> Vec<f64> {
    let g2 = gamma + 2.0;
    let norm = (gamma + 1.0) * g2;
    (0..cells)
        .map(|j| {
            let (a, b) = (j as f64 * dx, (j + 1) as f64 * dx);
            // b^{g2} − a^{g2} without cancellation for narrow cells
            let diff = if a == 0.0 { b.powf(g2) } else { a.powf(g2) * (g2 * (dx / a).ln_1p()).exp_m1() };
            diff / norm
        })
        .collect()
}

impl Lp {
    fn dot(w: &[f64], q: &[f64]) -> f64 {
        w.iter().zip(q).map(|(a, b)| a * b).sum()
    }

    fn psi0(&self, q: &[f64]) -> f64 {
        q.iter().sum::<f64>() * self.dx
    }

    /// A block of slope h on [c, c+w], integrated exactly over the cells.
    fn block(&self, c: f64, w: f64, h: f64) -> Vec<f64> {
        let n = self.ca.len();
        let mut q = vec![0.0; n];
        let (lo, hi) = (c, c + w);
        let first = ((lo / self.dx).floor() as usize).min(n - 1);
        let last = ((hi / self.dx).ceil() as usize).min(n);
        for (j, qj) in q.iter_mut().enumerate().take(last).skip(first) {
            let a = (j as f64 * self.dx).max(lo);
            let b = ((j + 1) as f64 * self.dx).min(hi);
            if b > a {
                *qj = (h * (b - a) / self.dx).min(self.cap);
            }
        }
        q
    }

    /// Place a block of width w and slope h so its low moment hits the target.
    fn placed_block(&self, w: f64, h: f64) -> Option<Vec<f64>> {
        let window = self.dx * self.ca.len() as f64;
        if w >= window {
            return None;
        }
        let moment = |c: f64| Self::dot(&self.ca, &self.block(c, w, h));
        let (mut lo, mut hi) = (0.0, window - w);
        if moment(lo) > self.target || moment(hi) < self.target {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if moment(mid) < self.target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = 0.5 * (lo + hi);
        let mut q = self.block(c, w, h);
        // remove the bisection residue by scaling the moment exactly
        let m = Self::dot(&self.ca, &q);
        if m > 0.0 {
            let f = self.target / m;
            if q.iter().all(|x| x * f <= self.cap) && (self.rule == MassRule::AtMost || (f - 1.0).abs() < 1e-9) {
                q.iter_mut().for_each(|x| *x *= f);
            }
        }
        Some(q)
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
        let pieces = rng.gen_range(1..=3);
        let mut acc = vec![0.0; self.ca.len()];
        let mut weights: Vec<f64> = (0..pieces).map(|_| rng.gen_range(0.1..1.0)).collect();
        let tot: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= tot);
        for wgt in weights {
            let mut found = None;
            for attempt in 0..500 {
                // near the least feasible moment only the steepest block fits
                let h = if attempt == 499 { self.cap } else { self.cap * rng.gen_range(0.05..1.0f64) };
                let mass = match self.rule {
                    MassRule::Exactly => self.mass,
                    MassRule::AtMost => self.mass * rng.gen_range(0.05..1.0f64),
                };
                if let Some(q) = self.placed_block(mass / h, h) {
                    found = Some(q);
                    break;
                }
            }
            let q = found?;
            acc.iter_mut().zip(q).for_each(|(a, b)| *a += wgt * b);
        }
        Some(acc)
    }

    fn max_step(&self, q: &[f64], idx: &[usize], dir: &[f64]) -> f64 {
        let mut eps = f64::INFINITY;
        for (&i, &d) in idx.iter().zip(dir) {
            if d > 0.0 {
                eps = eps.min((self.cap - q[i]) / d);
            } else if d < 0.0 {
                eps = eps.min(q[i] / -d);
            }
        }
        if self.rule == MassRule::AtMost {
            let dm: f64 = dir.iter().sum::<f64>() * self.dx;
            if dm > 0.0 {
                eps = eps.min(((self.mass - self.psi0(q)) / dm).max(0.0));
            }
        }
        eps.max(0.0)
    }

    fn apply(&self, q: &mut [f64], idx: &[usize], dir: &[f64], eps: f64) {
        for (&i, &d) in idx.iter().zip(dir) {
            q[i] = (q[i] + eps * d).clamp(0.0, self.cap);
        }
    }

    /// Cells that can serve as the adjusting pair of a move.
    fn candidates(&self, q: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
        let tol = 1e-12 * self.cap;
        let n = q.len();
        let mut s: Vec<usize> = (0..n)
            .filter(|&j| {
                let frac = q[j] > tol && q[j] < self.cap - tol;
                let edge = j + 1 < n && (q[j] - q[j + 1]).abs() > tol;
                let edge_prev = j > 0 && (q[j] - q[j - 1]).abs() > tol;
                frac || edge || edge_prev
            })
            .collect();
        while s.len() > 24 {
            let i = rng.gen_range(0..s.len());
            s.swap_remove(i);
        }
        for _ in 0..3 {
            s.push(rng.gen_range(0..n));
        }
        s.sort_unstable();
        s.dedup();
        s
    }

    /// Best move that keeps the low moment (and for `Exactly`, the mass) fixed and
    /// involves the pair (j, k) plus one free cell; returns the gain.
    fn best_triple(&self, q: &mut [f64], j: usize, k: usize) -> f64 {
        let n = q.len();
        let (caj, cak) = (self.ca[j], self.ca[k]);
        let mut best = (0.0, usize::MAX, [0.0; 3], 0.0);
        for i in 0..n {
            if i == j || i == k {
                continue;
            }
            let ci = self.ca[i];
            let mut d = [caj - cak, cak - ci, ci - caj];
            let g = self.cb[i] * d[0] + self.cb[j] * d[1] + self.cb[k] * d[2];
            if g == 0.0 {
                continue;
            }
            if g > 0.0 {
                d.iter_mut().for_each(|x| *x = -*x);
            }
            let eps = self.max_step(q, &[i, j, k], &d);
            let gain = eps * g.abs();
            if gain > best.0 {
                best = (gain, i, d, eps);
            }
        }
        if best.1 != usize::MAX {
            self.apply(q, &[best.1, j, k], &best.2, best.3);
        }
        best.0
    }

    /// Best two-cell move keeping the low moment fixed (mass may change).
    fn best_pair(&self, q: &mut [f64], j: usize) -> f64 {
        let n = q.len();
        let caj = self.ca[j];
        let mut best = (0.0, usize::MAX, [0.0; 2], 0.0);
        for i in 0..n {
            if i == j {
                continue;
            }
            let mut d = [caj, -self.ca[i]];
            let g = self.cb[i] * d[0] + self.cb[j] * d[1];
            if g == 0.0 {
                continue;
            }
            if g > 0.0 {
                d.iter_mut().for_each(|x| *x = -*x);
            }
            let eps = self.max_step(q, &[i, j], &d);
            let gain = eps * g.abs();
            if gain > best.0 {
                best = (gain, i, d, eps);
            }
        }
        if best.1 != usize::MAX {
            self.apply(q, &[best.1, j], &best.2, best.3);
        }
        best.0
    }

    fn descend(&self, mut q: Vec<f64>, rng: &mut ChaCha8Rng) -> Vec<f64> {
        for _ in 0..5000 {
            let obj = Self::dot(&self.cb, &q);
            let s = self.candidates(&q, rng);
            let mut gain = 0.0;
            if self.rule == MassRule::AtMost {
                for &j in &s {
                    gain += self.best_pair(&mut q, j);
                }
            }
            for (a, &j) in s.iter().enumerate() {
                for &k in &s[a + 1..] {
                    gain += self.best_triple(&mut q, j, k);
                }
            }
            if gain <= 1e-15 * obj.abs() {
                break;
            }
        }
        q
    }
}

/// Projected coordinate descent from random feasible starts.
pub fn minimise_profile(p: &ProfileProblem, starts: usize, seed: u64) -> Result<ProfileMinimum> {
    if p.cells < 4 || !(p.window > 0.0 && p.cap > 0.0 && p.mass > 0.0 && p.low_target > 0.0) {
        return arg("profile problem needs positive data and at least 4 cells");
    }
    if !(p.high_exp >= p.low_exp && p.low_exp >= 0.0) {
        return arg("profile problem needs high_exp >= low_exp >= 0");
    }
    let dx = p.window / p.cells as f64;
    let lp = Lp {
        ca: cell_weights(p.cells, dx, p.low_exp),
        cb: cell_weights(p.cells, dx, p.high_exp),
        dx,
        cap: p.cap,
        mass: p.mass,
        rule: p.rule,
        target: p.low_target,
    };
    // the largest attainable low moment pushes full mass to the right end
    let w = p.mass / p.cap;
    if w >= p.window || Lp::dot(&lp.ca, &lp.block(p.window - w, w, p.cap)) < p.low_target {
        return arg("target moment exceeds what the truncation window allows");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<f64>> = None;
    let mut done = 0;
    for _ in 0..starts {
        let Some(q0) = lp.random_start(&mut rng) else { continue };
        let q = lp.descend(q0, &mut rng);
        done += 1;
        let better = match &best {
            None => true,
            Some(b) => Lp::dot(&lp.cb, &q) < Lp::dot(&lp.cb, b),
        };
        if better {
            best = Some(q);
        }
    }
    let q = best.ok_or_else(|| BoundError::NonConvergence("no feasible random start found".into()))?;
    Ok(ProfileMinimum {
        value: Lp::dot(&lp.cb, &q),
        low_moment: Lp::dot(&lp.ca, &q),
        psi0: lp.psi0(&q),
        slopes: q,
        starts: done,
    })
}

/// Outcome of [`rearrangement_min_check`]; a randomised check, not a proof.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RearrangementCheck {
    pub profile: Option<ExtremalProfile>,
    pub profile_value: f64,
    pub minimum: f64,
    pub relative_gap: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks that the discretised minimum of ∫ r^β Ψ at fixed ∫ r^α Ψ = A is
/// attained by Φ_s within 1%.
pub fn rearrangement_min_check(alpha: f64, beta: f64, m: f64, l: f64, a: f64, seed: u64) -> Result<RearrangementCheck> {
    if !(beta >= alpha && alpha >= 0.0) {
        return arg("needs beta >= alpha >= 0");
    }
    if !(m > 0.0 && l > 0.0 && a > 0.0) {
        return arg("needs M, L, A > 0");
    }
    let tolerance = 1e-2;
    if beta == alpha {
        return Ok(RearrangementCheck { profile: None, profile_value: a, minimum: a, relative_gap: 0.0, tolerance, passed: true });
    }
    let p = alpha + 2.0;
    let target = a * (alpha + 1.0) * p * l.powf(alpha + 1.0) / m.powf(p);
    if target < 1.0 {
        return arg("A is below the moment of the s = 0 profile");
    }
    let (mut lo, mut hi) = (0.0, (target / p).powf(1.0 / (p - 1.0)).max(1.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if power_difference(p, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let prof = ExtremalProfile::new(m, l, 0.5 * (lo + hi) * m / l)?;
    let profile_value = profile_moment(&prof, beta)?;
    let problem = ProfileProblem {
        cells: 400,
        window: 2.0 * prof.support_end() + m / l,
        cap: l,
        mass: m,
        rule: MassRule::AtMost,
        low_exp: alpha,
        low_target: a,
        high_exp: beta,
    };
    let min = minimise_profile(&problem, 20, seed)?;
    let relative_gap = (min.value - profile_value) / profile_value;
    Ok(RearrangementCheck {
        profile: Some(prof),
        profile_value,
        minimum: min.value,
        relative_gap,
        tolerance,
        passed: relative_gap.abs() <= tolerance,
    })
}
