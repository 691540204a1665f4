//! k-thresholds of the theorems, from exact binomial coefficients.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{arg, BoundError, Result};
use crate::geometry::omega;

/// C(n, m) exactly.
pub fn binom(n: i64, m: i64) -> Result<u128> {
    if n < 0 || m < 0 || m > n {
        return arg(format!("binom needs 0 <= m <= n, got ({n}, {m})"));
    }
    let m = m.min(n - m) as u128;
    let n = n as u128;
    let mut c: u128 = 1;
    for i in 0..m {
        // c·(n−i) is divisible by (i+1) after the multiplication
        c = c
            .checked_mul(n - i)
            .ok_or_else(|| BoundError::Resource(format!("C({n},{m}) overflows 128 bits")))?
            / (i + 1);
    }
    Ok(c)
}

/// C^{i+1}_M / C^i_M, or None when C^i_M = 0.
fn ratio(m: i64, i: i64) -> Option<f64> {
    if i > m {
        return None;
    }
    if i + 1 > m {
        return Some(0.0);
    }
    match (binom(m, i + 1), binom(m, i)) {
        (Ok(a), Ok(b)) => Some(a as f64 / b as f64),
        _ => Some((m - i) as f64 / (i + 1) as f64),
    }
}

fn max_over(ms: &[i64], is: std::ops::RangeInclusive<i64>, f: impl Fn(f64) -> f64) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for &m in ms {
        for i in is.clone() {
            if let Some(r) = ratio(m, i) {
                best = best.max(f(r));
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    pub name: String,
    /// The defined quantity (k̃ itself for the k̃₁, k̃₂ of the high-dimensional theorem).
    pub value: f64,
    /// ln of the least admissible k implied by this entry.
    pub ln_required: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub n: usize,
    pub l: u32,
    pub entries: Vec<Threshold>,
}

impl ThresholdSet {
    /// Least admissible k (may be +inf if beyond f64).
    pub fn k_required(&self) -> f64 {
        self.ln_k_required().exp()
    }

    pub fn ln_k_required(&self) -> f64 {
        self.entries.iter().map(|e| e.ln_required).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn admits(&self, k: u64) -> bool {
        self.entries.is_empty() || (k as f64).ln() >= self.ln_k_required() - 1e-12
    }
}

fn entry(name: &str, value: f64) -> Threshold {
    Threshold { name: name.into(), value, ln_required: value.ln() }
}

/// k̃₁ and k̃₂ of the high-dimensional theorem (independent of l).
pub fn highdim_root_thresholds(n: usize) -> (f64, f64) {
    let m = n as i64;
    let nf = n as f64;
    let cmax = |lo: i64| (lo..=m + 1).filter_map(|i| binom(m + 1, i).ok()).max().unwrap_or(0) as f64;
    let k1 = 9375.0 / (149.0 * nf * (nf - 1.0).powi(3)) * cmax(4);
    let c1 = (nf - 1.0) * (nf - 3.0) * (2.0 * nf + 1.0) / 576_000_000.0;
    let k2 = 50.0 / (317.0 * c1) * cmax(6);
    (k1, k2)
}

fn compute(n: usize, l: u32) -> ThresholdSet {
    let li = l as i64;
    let mut entries = Vec::new();
    match n {
        2 if l >= 3 => {
            let k1 = 1.5 + max_over(&[2 * li + 2, 2 * li + 1, 2 * li], 1..=2 * li - 1, |r| (r / 2.0).powi(2)) / 24.0;
            let k2 = max_over(&[li + 1, li - 1], 1..=li - 1, |r| r / 96.0);
            entries.push(entry("k1", k1));
            entries.push(entry("k2", k2));
        }
        3 if l >= 3 => {
            let ms = [2 * li + 3, 2 * li + 2, 2 * li + 1];
            let k1 = 2.0 / 105.0 * max_over(&ms, 1..=2 * li, |r| (r / 44.0 + 1.0 / 3.0).powi(3));
            let k2 = 2.0 / 105.0 * max_over(&ms, 1..=2 * li, |r| (r / 2.0).powi(3));
            entries.push(entry("k1", k1));
            entries.push(entry("k2", k2));
        }
        4 if l >= 3 => {
            let ms = [2 * li + 4, 2 * li + 3, 2 * li + 2];
            let k1 = max_over(&ms, 1..=2 * li + 3, |r| (r / 27.0 + 0.5).powi(4)) / 455.0;
            let k2 = max_over(&ms, 1..=2 * li + 3, |r| (r / 2.0).powi(4)) / 455.0;
            entries.push(entry("k1", k1));
            entries.push(entry("k2", k2));
        }
        n if n >= 5 => {
            let nf = n as f64;
            let (k1, k2) = highdim_root_thresholds(n);
            entries.push(Threshold { name: "k1_tilde".into(), value: k1, ln_required: 0.5 * nf * k1.ln() });
            entries.push(Threshold { name: "k2_tilde".into(), value: k2, ln_required: 0.5 * nf * k2.ln() });
            let big_n = 2 * li + n as i64;
            let ms = [big_n, big_n - 1, big_n - 2];
            let w = omega(n);
            let tbar1 = 4.0 * std::f64::consts::PI / w.powf(2.0 / nf) * (nf / (nf + 2.0)).sqrt();
            // ω²/(4π)^n·((n+2)/n)^{n/2} = t̄₁^{−n}; work with logs of the n-th powers
            let ln3 = max_over(&ms, 1..=big_n - 1, |r| nf * ((nf - 1.0) / (24.0 * tbar1) * r + 0.5).ln()) - nf * tbar1.ln();
            let ln4 = max_over(&ms, 1..=big_n - 1, |r| if r > 0.0 { nf * (r / 2.0).ln() } else { f64::NEG_INFINITY }) - nf * tbar1.ln();
            entries.push(Threshold { name: "k3_tilde".into(), value: ln3.exp(), ln_required: ln3 });
            entries.push(Threshold { name: "k4_tilde".into(), value: ln4.exp(), ln_required: ln4 });
        }
        _ => {}
    }
    ThresholdSet { n, l, entries }
}

type Cache = Mutex<HashMap<(usize, u32), ThresholdSet>>;

/// Thresholds applicable to (n, l); empty when the theorem has no k restriction.
pub fn thresholds(n: usize, l: u32) -> Result<ThresholdSet> {
    if n < 2 || l < 1 {
        return arg("thresholds need n >= 2 and l >= 1");
    }
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("threshold cache").get(&(n, l)) {
        return Ok(t.clone());
    }
    let t = compute(n, l);
    cache.lock().expect("threshold cache").insert((n, l), t.clone());
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(n: usize, m: usize) -> u128 {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for j in 1..row.len() {
                next[j] = row[j - 1] + row[j];
            }
            row = next;
        }
        row[m]
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2).unwrap(), 10);
        assert_eq!(binom(0, 0).unwrap(), 1);
        assert_eq!(binom(40, 20).unwrap(), 137846528820);
        assert!(binom(3, 4).is_err() && binom(-1, 0).is_err());
        for n in 0..70 {
            for m in 0..=n {
                assert_eq!(binom(n as i64, m as i64).unwrap(), pascal(n, m));
            }
        }
        assert!(binom(130, 65).is_err());
    }

    #[test]
    fn k1_tilde_example() {
        let (k1, _) = highdim_root_thresholds(7);
        assert!((k1 - 9375.0 / (149.0 * 1512.0) * 70.0).abs() < 1e-12);
    }

    #[test]
    fn n2_l3_by_enumeration() {
        let t = thresholds(2, 3).unwrap();
        // families C_8, C_7, C_6 for i in 1..=5: the largest ratio is C^2_8/C^1_8 = 7/2
        let k1 = 1.5 + (3.5f64 / 2.0).powi(2) / 24.0;
        assert!((t.entries[0].value - k1).abs() < 1e-12);
        // C^2_4/C^1_4 = 3/2 is the largest for C_4 and C_2
        assert!((t.entries[1].value - 1.5 / 96.0).abs() < 1e-12);
        assert!(thresholds(2, 2).unwrap().entries.is_empty());
        assert!(thresholds(2, 2).unwrap().admits(1));
    }

    #[test]
    fn n3_and_n4_values() {
        let t = thresholds(3, 3).unwrap();
        // largest ratio over C_9, C_8, C_7 for i >= 1 is C^2_9/C^1_9 = 4
        assert!((t.entries[0].value - 2.0 / 105.0 * (4.0f64 / 44.0 + 1.0 / 3.0).powi(3)).abs() < 1e-12);
        assert!((t.entries[1].value - 2.0 / 105.0 * 8.0).abs() < 1e-12);
        let t = thresholds(4, 3).unwrap();
        // C^2_10/C^1_10 = 4.5
        assert!((t.entries[1].value - (2.25f64).powi(4) / 455.0).abs() < 1e-12);
    }

    #[test]
    fn highdim_entries_are_finite() {
        for n in 5..=12 {
            for l in 1..=6 {
                let t = thresholds(n, l).unwrap();
                assert_eq!(t.entries.len(), 4);
                assert!(t.entries.iter().all(|e| e.ln_required.is_finite()));
            }
        }
    }
}
