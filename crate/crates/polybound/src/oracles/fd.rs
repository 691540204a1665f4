//! Finite-difference spectra of (−Δ)^l on lattice domains.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::jacobi::{jacobi_eigen, SymMatrix};
use super::{richardson_extrapolate, Method, Spectrum};
use crate::error::{arg, BoundError, Result};

const MAX_NODES: usize = 40_000;
const DENSE_NODES: usize = 300;

/// Interior nodes of a lattice with spacing `h`, given as an occupancy mask
/// over a box of `dims` nodes (row-major, last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    dims: Vec<usize>,
    mask: Vec<bool>,
    h: f64,
    refinable_sides: Option<Vec<f64>>,
}

/// How the boundary conditions of order l are discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// Clamped conditions: the lattice operator (−Δ_h)^l applied to the
    /// zero-extended grid function; for l = 2 the outside neighbour two steps
    /// away is reflected (u_{-1} = u_1), the second-order clamped stencil.
    Clamped,
    /// A^l, the l-th power of the Dirichlet 5-point Laplacian (hinged/Navier
    /// conditions for l = 2).
    DirichletPower,
}

impl GridDomain {
    /// Interior nodes of the box [0,a_1]×…×[0,a_n]; each a_i/h must be an integer.
    pub fn box_grid(sides: &[f64], h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return arg("mesh width must be positive");
        }
        let mut dims = Vec::with_capacity(sides.len());
        for &a in sides {
            let cells = a / h;
            let r = cells.round();
            if (cells - r).abs() > 1e-6 * cells.max(1.0) || r < 2.0 {
                return arg(format!("side {a} is not a multiple (>= 2) of h = {h}"));
            }
            dims.push(r as usize - 1);
        }
        let total = dims.iter().product();
        Ok(GridDomain { dims, mask: vec![true; total], h, refinable_sides: Some(sides.to_vec()) })
    }

    pub fn from_mask(dims: Vec<usize>, mask: Vec<bool>, h: f64) -> Result<Self> {
        if dims.is_empty() || mask.len() != dims.iter().product::<usize>() {
            return arg("mask size does not match dims");
        }
        if !mask.iter().any(|&b| b) {
            return arg("mask has no interior node");
        }
        if !(h > 0.0 && h.is_finite()) {
            return arg("mesh width must be positive");
        }
        Ok(GridDomain { dims, mask, h, refinable_sides: None })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn interior_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// The same grid with its axes reordered; spectra are unchanged.
    pub fn permuted_axes(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return arg("not a permutation of the axes");
        }
        let dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut mask = vec![false; self.mask.len()];
        let mut idx = vec![0usize; n];
        for (flat, m) in self.mask.iter().enumerate() {
            self.unflatten(flat, &mut idx);
            let new: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            mask[flatten(&dims, &new)] = *m;
        }
        Ok(GridDomain {
            dims,
            mask,
            h: self.h,
            refinable_sides: self.refinable_sides.as_ref().map(|s| perm.iter().map(|&p| s[p]).collect()),
        })
    }

    fn unflatten(&self, mut flat: usize, out: &mut [usize]) {
        for ax in (0..self.dims.len()).rev() {
            out[ax] = flat % self.dims[ax];
            flat /= self.dims[ax];
        }
    }

    fn interior_at(&self, idx: &[i64]) -> Option<usize> {
        let mut flat = 0usize;
        for (ax, &i) in idx.iter().enumerate() {
            if i < 0 || i as usize >= self.dims[ax] {
                return None;
            }
            flat = flat * self.dims[ax] + i as usize;
        }
        self.mask[flat].then_some(flat)
    }
}

fn flatten(dims: &[usize], idx: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |f, (&i, &d)| f * d + i)
}

type Stencil = BTreeMap<Vec<i64>, f64>;

/// (−Δ_h)^l on the infinite lattice, in units of h^{-2l}.
fn lattice_power(n: usize, l: u32) -> Stencil {
    let mut base = Stencil::new();
    base.insert(vec![0; n], 2.0 * n as f64);
    for ax in 0..n {
        for s in [-1i64, 1] {
            let mut o = vec![0; n];
            o[ax] = s;
            base.insert(o, -1.0);
        }
    }
    let mut acc = Stencil::new();
    acc.insert(vec![0; n], 1.0);
    for _ in 0..l {
        let mut next = Stencil::new();
        for (o1, c1) in &acc {
            for (o2, c2) in &base {
                let o: Vec<i64> = o1.iter().zip(o2).map(|(a, b)| a + b).collect();
                *next.entry(o).or_insert(0.0) += c1 * c2;
            }
        }
        next.retain(|_, c| *c != 0.0);
        acc = next;
    }
    acc
}

type SparseRows = Vec<Vec<(usize, f64)>>;

/// Operator rows over the compressed interior numbering.
fn assemble(grid: &GridDomain, l: u32, scheme: FdScheme) -> (usize, SparseRows) {
    let n = grid.dims.len();
    let mut number = vec![usize::MAX; grid.mask.len()];
    let mut count = 0;
    for (f, &m) in grid.mask.iter().enumerate() {
        if m {
            number[f] = count;
            count += 1;
        }
    }
    let scale = grid.h.powi(-2 * l as i32);
    let mut idx = vec![0usize; n];
    let stencil = match scheme {
        FdScheme::Clamped => lattice_power(n, l),
        FdScheme::DirichletPower => lattice_power(n, 1),
    };
    let mut rows: SparseRows = vec![Vec::new(); count];
    for (flat, &m) in grid.mask.iter().enumerate() {
        if !m {
            continue;
        }
        grid.unflatten(flat, &mut idx);
        let row = &mut rows[number[flat]];
        for (o, c) in &stencil {
            let j: Vec<i64> = idx.iter().zip(o).map(|(&a, &b)| a as i64 + b).collect();
            if let Some(jf) = grid.interior_at(&j) {
                let s = if scheme == FdScheme::Clamped { scale } else { grid.h.powi(-2) };
                row.push((number[jf], c * s));
            }
        }
        if scheme == FdScheme::Clamped && l == 2 {
            let mut ghosts = 0.0;
            for ax in 0..n {
                for s in [-1i64, 1] {
                    let mut j: Vec<i64> = idx.iter().map(|&a| a as i64).collect();
                    j[ax] += s;
                    if grid.interior_at(&j).is_none() {
                        ghosts += 1.0;
                    }
                }
            }
            if ghosts > 0.0 {
                let me = number[flat];
                row.iter_mut().find(|(c, _)| *c == me).expect("diagonal present").1 += ghosts * scale;
            }
        }
        row.sort_by_key(|e| e.0);
    }
    if scheme == FdScheme::DirichletPower && l > 1 {
        let a = rows.clone();
        for _ in 1..l {
            rows = rows
                .iter()
                .map(|r| {
                    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
                    for &(t, v) in r {
                        for &(j, w) in &a[t] {
                            *acc.entry(j).or_insert(0.0) += v * w;
                        }
                    }
                    acc.into_iter().filter(|e| e.1 != 0.0).collect()
                })
                .collect();
        }
    }
    (count, rows)
}

/// Symmetric banded matrix: `data[i*(bw+1)+d]` holds entry (i, i−d).
struct Band {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl Band {
    fn from_rows(n: usize, rows: &SparseRows) -> Self {
        let bw = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0);
        let mut data = vec![0.0; n * (bw + 1)];
        for (i, r) in rows.iter().enumerate() {
            for &(j, v) in r {
                if j <= i {
                    data[i * (bw + 1) + (i - j)] = v;
                }
            }
        }
        Band { n, bw, data }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        if i - j > self.bw {
            0.0
        } else {
            self.data[i * (self.bw + 1) + (i - j)]
        }
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let w = self.bw + 1;
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let row = &self.data[i * w..(i + 1) * w];
            y[i] += row[0] * x[i];
            for d in 1..=self.bw.min(i) {
                let v = row[d];
                y[i] += v * x[i - d];
                y[i - d] += v * x[i];
            }
        }
    }

    /// In-place Cholesky factor L (same layout).
    fn cholesky(&self) -> Result<Band> {
        let w = self.bw + 1;
        let mut l = self.data.clone();
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            for j in lo..=i {
                // entry (i, j)
                let mut s = l[i * w + (i - j)];
                let kmin = lo.max(j.saturating_sub(self.bw));
                for k in kmin..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(BoundError::NonConvergence(
                            "finite-difference operator is not positive definite".into(),
                        ));
                    }
                    l[i * w] = s.sqrt();
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Ok(Band { n: self.n, bw: self.bw, data: l })
    }

    /// Solve L Lᵀ x = b where self is the Cholesky factor.
    fn solve(&self, b: &mut [f64]) {
        let w = self.bw + 1;
        for i in 0..self.n {
            let mut s = b[i];
            for d in 1..=self.bw.min(i) {
                s -= self.data[i * w + d] * b[i - d];
            }
            b[i] = s / self.data[i * w];
        }
        for i in (0..self.n).rev() {
            b[i] /= self.data[i * w];
            let v = b[i];
            for d in 1..=self.bw.min(i) {
                b[i - d] -= self.data[i * w + d] * v;
            }
        }
    }
}

fn orthonormalise(vs: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    for i in 0..vs.len() {
        for _pass in 0..2 {
            for j in 0..i {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let (head, tail) = vs.split_at_mut(i);
                tail[0].iter_mut().zip(&head[j]).for_each(|(a, b)| *a -= d * b);
            }
        }
        let norm = vs[i].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            vs[i].iter_mut().for_each(|x| *x = rng.gen_range(-1.0..1.0));
            // rare; redo this vector against the earlier ones
            for j in 0..i {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let (head, tail) = vs.split_at_mut(i);
                tail[0].iter_mut().zip(&head[j]).for_each(|(a, b)| *a -= d * b);
            }
            let norm = vs[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            vs[i].iter_mut().for_each(|x| *x /= norm);
        } else {
            vs[i].iter_mut().for_each(|x| *x /= norm);
        }
    }
}

/// k smallest eigenvalues of an SPD band matrix by inverse subspace iteration
/// with Rayleigh–Ritz projection onto a block of size p > k.
fn smallest_band_eigen(b: &Band, k: usize) -> Result<Vec<f64>> {
    let n = b.n;
    if n <= DENSE_NODES {
        let mut flat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                flat[i * n + j] = b.get(i, j);
            }
        }
        let (mut vals, _) = jacobi_eigen(&SymMatrix::from_flat(n, flat)?)?;
        vals.truncate(k);
        return Ok(vals);
    }
    let p = (2 * k).max(k + 8).min(n);
    let chol = b.cholesky()?;
    let norm = (0..n).map(|i| b.get(i, i)).fold(0.0f64, f64::max) * 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut vs: Vec<Vec<f64>> = (0..p).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    orthonormalise(&mut vs, &mut rng);
    let mut prev: Vec<f64> = vec![f64::INFINITY; k];
    let mut bw = vec![0.0; n];
    for iter in 0..1000 {
        for v in vs.iter_mut() {
            chol.solve(v);
        }
        orthonormalise(&mut vs, &mut rng);
        let bv: Vec<Vec<f64>> = vs
            .iter()
            .map(|v| {
                b.matvec(v, &mut bw);
                bw.clone()
            })
            .collect();
        let mut h = vec![0.0; p * p];
        for i in 0..p {
            for j in 0..=i {
                let x: f64 = vs[i].iter().zip(&bv[j]).map(|(a, c)| a * c).sum();
                let y: f64 = vs[j].iter().zip(&bv[i]).map(|(a, c)| a * c).sum();
                h[i * p + j] = 0.5 * (x + y);
                h[j * p + i] = h[i * p + j];
            }
        }
        let (theta, y) = jacobi_eigen(&SymMatrix::from_flat(p, h)?)?;
        let mut next = vec![vec![0.0; n]; p];
        for (c, out) in next.iter_mut().enumerate() {
            for (r, v) in vs.iter().enumerate() {
                let w = y[r * p + c];
                out.iter_mut().zip(v).for_each(|(o, x)| *o += w * x);
            }
        }
        vs = next;
        // Ritz values carry round-off of order eps·‖B‖
        let floor = 1e3 * f64::EPSILON * norm;
        let converged = theta[..k].iter().zip(&prev).all(|(a, b)| (a - b).abs() <= 1e-12 * a + floor);
        prev.copy_from_slice(&theta[..k]);
        if iter >= 2 && converged {
            return Ok(prev);
        }
    }
    Err(BoundError::NonConvergence("subspace iteration did not converge".into()))
}

/// The k smallest eigenvalues of the discrete order-l operator on one grid.
/// No error estimate is available from a single grid (NaN entries).
pub fn fd_spectrum(grid: &GridDomain, l: u32, k: usize, scheme: FdScheme) -> Result<Spectrum> {
    if l == 0 {
        return arg("order l must be at least 1");
    }
    let count = grid.interior_count();
    if count > MAX_NODES {
        return Err(BoundError::Resource(format!("{count} interior nodes exceed the limit of {MAX_NODES}")));
    }
    if k == 0 || k > count {
        return arg(format!("k = {k} must lie in 1..={count}"));
    }
    let (n, rows) = assemble(grid, l, scheme);
    let band = Band::from_rows(n, &rows);
    let vals = smallest_band_eigen(&band, k)?;
    Ok(Spectrum {
        n: grid.dims.len(),
        l,
        eigenvalues: vals,
        method: Method::FiniteDifference,
        error_estimate: vec![f64::NAN; k],
    })
}

/// Two-grid spectrum on a box: grids h and h/2 combined by second-order
/// Richardson extrapolation; the error estimate is |λ_{h/2} − λ_h|/λ.
pub fn fd_spectrum_extrapolated(sides: &[f64], h: f64, l: u32, k: usize, scheme: FdScheme) -> Result<Spectrum> {
    let coarse = fd_spectrum(&GridDomain::box_grid(sides, h)?, l, k, scheme)?;
    let fine = fd_spectrum(&GridDomain::box_grid(sides, h / 2.0)?, l, k, scheme)?;
    let (eigenvalues, error_estimate) = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(&a, &b)| {
            let (v, e) = richardson_extrapolate(a, b, 2);
            (v, e / v)
        })
        .unzip();
    Ok(Spectrum { n: sides.len(), l, eigenvalues, method: Method::FiniteDifference, error_estimate })
}
