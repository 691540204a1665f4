//! Bound-versus-oracle sweeps over a k range.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{BoundId, DomainSpec, OracleSpec, Refinement, SweepConfig};
use crate::error::Result;
use crate::oracles::{
    ball_spectrum, fd_spectrum, fd_spectrum_extrapolated, rectangle_spectrum, FdScheme, GridDomain, Method, Spectrum,
};

/// One (k, bound) cell. Slack and soundness are present only when the bound
/// is valid, refers to the oracle's operator, and an oracle was computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: u64,
    pub bound_id: String,
    pub value: f64,
    pub valid: bool,
    pub oracle_sum: Option<f64>,
    pub slack: Option<f64>,
    pub sound: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub bound_id: String,
    pub valid_rows: usize,
    pub compared_rows: usize,
    pub violations: usize,
    pub min_slack: Option<f64>,
    pub min_slack_k: Option<u64>,
    /// min over compared rows of slack / oracle_sum
    pub min_relative_slack: Option<f64>,
}

/// First k at which a bound exceeds the one it was introduced to improve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overtake {
    pub bound_id: String,
    pub predecessor: String,
    pub first_k: Option<u64>,
}

/// λ_j ≥ 4π²(j/(ω_n V))^{2/n} for every j up to k_max.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyaCheck {
    pub checked: usize,
    pub violations: usize,
    pub min_ratio: f64,
    pub min_ratio_k: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub domain: DomainSpec,
    pub n: usize,
    pub volume: f64,
    pub inertia: f64,
    pub l: u32,
    pub k_range: [u64; 2],
    pub oracle: OracleSpec,
    pub oracle_method: Option<Method>,
    pub tolerance: f64,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub summary: Vec<BoundSummary>,
    pub overtakes: Vec<Overtake>,
    pub polya: Option<PolyaCheck>,
    pub violations: usize,
    pub passed: bool,
}

/// The k_max smallest eigenvalues the configured oracle produces.
pub fn oracle_spectrum(domain: &DomainSpec, oracle: OracleSpec, l: u32, k_max: usize) -> Result<Option<Spectrum>> {
    Ok(Some(match (oracle, domain) {
        (OracleSpec::None, _) => return Ok(None),
        (OracleSpec::ClosedForm, DomainSpec::Rectangle { sides }) => rectangle_spectrum(sides, l, k_max)?,
        (OracleSpec::ClosedForm, DomainSpec::Ball { n, radius }) => ball_spectrum(*n, *radius, k_max)?,
        (OracleSpec::Fd { h, refinement: Refinement::Richardson }, DomainSpec::Rectangle { sides }) => {
            fd_spectrum_extrapolated(sides, h, l, k_max, FdScheme::Clamped)?
        }
        (OracleSpec::Fd { h, refinement: Refinement::None }, DomainSpec::Rectangle { sides }) => {
            fd_spectrum(&GridDomain::box_grid(sides, h)?, l, k_max, FdScheme::Clamped)?
        }
        (o, d) => return Err(crate::error::BoundError::Config(format!("oracle {o:?} does not apply to {d:?}"))),
    }))
}

pub fn polya_check(eigenvalues: &[f64], n: usize, omega_n: f64, volume: f64) -> PolyaCheck {
    let nf = n as f64;
    let (mut violations, mut min_ratio, mut min_k) = (0, f64::INFINITY, 0);
    for (j, &lam) in eigenvalues.iter().enumerate() {
        let k = j as u64 + 1;
        let weyl = 4.0 * PI * PI * (k as f64 / (omega_n * volume)).powf(2.0 / nf);
        let ratio = lam / weyl;
        if ratio < 1.0 - 1e-12 {
            violations += 1;
        }
        if ratio < min_ratio {
            min_ratio = ratio;
            min_k = k;
        }
    }
    PolyaCheck { checked: eigenvalues.len(), violations, min_ratio, min_ratio_k: min_k }
}

/// Evaluates every configured bound at every k against the oracle. Rows are
/// computed in parallel and sorted by (k, bound_id), so the report does not
/// depend on the thread count.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ComparisonReport> {
    let domain = cfg.validate()?;
    let d = domain.derived();
    let tol = cfg.tolerance();
    let opts = cfg.options();
    let spectrum = oracle_spectrum(&cfg.domain, cfg.oracle, cfg.l, cfg.k_range[1] as usize)?;
    let sums = spectrum.as_ref().map(Spectrum::partial_sums);

    let cells: Vec<(u64, BoundId)> = cfg.ks().flat_map(|k| cfg.bounds.iter().map(move |&b| (k, b))).collect();
    let mut rows = cells
        .par_iter()
        .map(|&(k, b)| -> Result<SweepRow> {
            let r = b.evaluate(&d, cfg.l, k, &opts)?;
            let oracle_sum = sums.as_ref().map(|s| s[k as usize - 1]);
            let compared = oracle_sum.filter(|_| r.valid && b.comparable());
            let slack = compared.map(|o| o - r.value);
            let sound = compared.map(|o| r.value <= o + tol * o.abs());
            Ok(SweepRow {
                k,
                bound_id: b.as_str().to_string(),
                value: r.value,
                valid: r.valid,
                oracle_sum,
                slack,
                sound,
                note: r.threshold_note.unwrap_or_default(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.k.cmp(&b.k).then_with(|| a.bound_id.cmp(&b.bound_id)));

    let mut by_bound: BTreeMap<&str, Vec<&SweepRow>> = BTreeMap::new();
    for r in &rows {
        by_bound.entry(r.bound_id.as_str()).or_default().push(r);
    }
    let summary: Vec<BoundSummary> = by_bound
        .iter()
        .map(|(id, rs)| {
            let compared: Vec<&&SweepRow> = rs.iter().filter(|r| r.slack.is_some()).collect();
            let min = compared
                .iter()
                .min_by(|a, b| a.slack.unwrap().total_cmp(&b.slack.unwrap()))
                .map(|r| (r.slack.unwrap(), r.k));
            let min_rel = compared
                .iter()
                .map(|r| r.slack.unwrap() / r.oracle_sum.unwrap())
                .min_by(f64::total_cmp);
            BoundSummary {
                bound_id: id.to_string(),
                valid_rows: rs.iter().filter(|r| r.valid).count(),
                compared_rows: compared.len(),
                violations: rs.iter().filter(|r| r.sound == Some(false)).count(),
                min_slack: min.map(|m| m.0),
                min_slack_k: min.map(|m| m.1),
                min_relative_slack: min_rel,
            }
        })
        .collect();

    let mut overtakes = Vec::new();
    let mut improved: Vec<BoundId> = cfg.bounds.clone();
    improved.sort_by_key(|b| b.as_str());
    for b in improved {
        let Some(p) = b.predecessor(cfg.l).filter(|p| cfg.bounds.contains(p)) else { continue };
        let (bs, ps) = (&by_bound[b.as_str()], &by_bound[p.as_str()]);
        let first_k = bs
            .iter()
            .zip(ps.iter())
            .find(|(x, y)| x.valid && y.valid && x.value > y.value)
            .map(|(x, _)| x.k);
        overtakes.push(Overtake { bound_id: b.as_str().into(), predecessor: p.as_str().into(), first_k });
    }

    let polya = spectrum
        .as_ref()
        .filter(|s| cfg.l == 1 && s.method != Method::FiniteDifference)
        .map(|s| polya_check(&s.eigenvalues, d.n, d.omega_n, d.volume));
    let violations = summary.iter().map(|s| s.violations).sum::<usize>() + polya.as_ref().map_or(0, |p| p.violations);
    Ok(ComparisonReport {
        domain: cfg.domain.clone(),
        n: d.n,
        volume: d.volume,
        inertia: d.inertia,
        l: cfg.l,
        k_range: cfg.k_range,
        oracle: cfg.oracle,
        oracle_method: spectrum.as_ref().map(|s| s.method),
        tolerance: tol,
        seed: cfg.seed,
        rows,
        summary,
        overtakes,
        polya,
        violations,
        passed: violations == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::BoundError;

    fn square(bounds: Vec<BoundId>, k: u64) -> SweepConfig {
        SweepConfig::new(DomainSpec::unit_square(), 1, [1, k], bounds, OracleSpec::ClosedForm)
    }

    #[test]
    fn square_l1_sweep_is_sound() {
        let cfg = square(
            vec![BoundId::LiYau, BoundId::Melas, BoundId::Ilyin, BoundId::JxL1, BoundId::ThmUnrestricted, BoundId::Master],
            100,
        );
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.rows.len(), 600);
        assert!(r.passed, "{:?}", r.summary);
        assert!(r.summary.iter().all(|s| s.min_slack.map_or(true, |m| m >= 0.0)));
        assert_eq!(r.polya.as_ref().unwrap().violations, 0);
        assert!(r.rows.windows(2).all(|w| (w[0].k, &w[0].bound_id) < (w[1].k, &w[1].bound_id)));
    }

    #[test]
    fn disk_checks_polya_per_eigenvalue() {
        let cfg = SweepConfig::new(DomainSpec::unit_disk(), 1, [1, 100], vec![BoundId::LiYau], OracleSpec::ClosedForm);
        let r = run_sweep(&cfg).unwrap();
        let p = r.polya.unwrap();
        assert_eq!((p.checked, p.violations), (100, 0));
        assert!(p.min_ratio > 1.0);
    }

    #[test]
    fn melas_overtakes_li_yau_immediately() {
        let r = run_sweep(&square(vec![BoundId::LiYau, BoundId::Melas], 10)).unwrap();
        assert_eq!(r.overtakes, vec![Overtake { bound_id: "melas".into(), predecessor: "li_yau".into(), first_k: Some(1) }]);
    }

    #[test]
    fn empty_bounds_is_a_config_error() {
        assert!(matches!(run_sweep(&square(vec![], 10)), Err(BoundError::Config(_))));
    }

    #[test]
    fn coarse_unrefined_grid_exposes_a_violation() {
        // the five-point spectrum saturates near 8/h², so once k approaches the
        // node count the discrete sums fall below the master bound
        let mut cfg = square(vec![BoundId::Master], 49);
        cfg.oracle = OracleSpec::Fd { h: 0.125, refinement: Refinement::None };
        cfg.tolerance = Some(0.0);
        let r = run_sweep(&cfg).unwrap();
        assert!(!r.passed && r.violations > 0);
        assert_eq!(r.rows.iter().find(|x| x.sound == Some(false)).unwrap().k, 27);
        assert!(r.polya.is_none());
    }

    #[test]
    fn stokes_is_not_compared() {
        let r = run_sweep(&square(vec![BoundId::Stokes], 3)).unwrap();
        assert!(r.rows.iter().all(|x| x.slack.is_none() && x.oracle_sum.is_some()));
    }
}
