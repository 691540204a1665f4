//! One document with every coefficient verdict and every lemma scan.

use serde::{Deserialize, Serialize};

use super::config::AuditConfig;
use crate::deep::{audit_coefficients, AuditEntry, Verdict};
use crate::error::Result;
use crate::lemmas::{
    moment_chain_audit, scan_g_convexity, scan_polynomial, scan_moment_lemma, ConvexityScan, PolyScan, MomentScan,
};

const VERDICTS: [Verdict; 5] = [Verdict::Match, Verdict::Conservative, Verdict::Mismatch, Verdict::Holds, Verdict::Fails];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub verdict_counts: Vec<(Verdict, usize)>,
    /// Share of the displayed constants that some entry re-derives.
    pub coverage_fraction: f64,
    pub coverage: Vec<(String, bool)>,
    pub coefficients: Vec<AuditEntry>,
    pub moment_lemma_chain: Vec<AuditEntry>,
    pub polynomial_inequality: PolyScan,
    pub g_convexity: ConvexityScan,
    pub moment_lemma: MomentScan,
}

impl AuditReport {
    /// Coefficient entries followed by the moment-lemma chain.
    pub fn entries(&self) -> impl Iterator<Item = &AuditEntry> {
        self.coefficients.iter().chain(&self.moment_lemma_chain)
    }

    /// Whether every lemma scan passed (the coefficient verdicts are findings, not checks).
    pub fn scans_passed(&self) -> bool {
        self.polynomial_inequality.passed && self.g_convexity.passed && self.moment_lemma.passed
    }
}

pub fn audit(cfg: &AuditConfig) -> Result<AuditReport> {
    let coeffs = audit_coefficients()?;
    let chain = moment_chain_audit();
    let verdict_counts = VERDICTS
        .iter()
        .map(|&v| (v, coeffs.count(v) + chain.iter().filter(|e| e.verdict == v).count()))
        .collect();
    Ok(AuditReport {
        config: *cfg,
        verdict_counts,
        coverage_fraction: coeffs.coverage_fraction(),
        coverage: coeffs.coverage,
        coefficients: coeffs.entries,
        moment_lemma_chain: chain,
        polynomial_inequality: scan_polynomial(cfg.grid, cfg.seed),
        g_convexity: scan_g_convexity(cfg.grid),
        moment_lemma: scan_moment_lemma(cfg.grid, cfg.moment_sets, cfg.seed)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lemmas::Grid;

    #[test]
    fn coarse_audit_covers_every_constant() {
        let r = audit(&AuditConfig { grid: Grid::Coarse, seed: 1, moment_sets: 4 }).unwrap();
        assert_eq!(r.coverage_fraction, 1.0);
        assert!(r.coefficients.iter().any(|e| e.printed.contains("145252")));
        assert!(r.g_convexity.passed);
        let total: usize = r.verdict_counts.iter().map(|c| c.1).sum();
        assert_eq!(total, r.entries().count());
    }
}
