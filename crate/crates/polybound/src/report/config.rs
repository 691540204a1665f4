//! Sweep and audit configuration, read from TOML.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classical::{cqw, cswz, ilyin, jx_l1, jx_l2, levine_protter, li_yau, melas, yy, BoundResult};
use crate::critical::master_bound;
use crate::deep::{recomputed_bound, stokes_bound, thm_for, thm_highdim, thm_n2, thm_n3, thm_n4, thm_unrestricted};
use crate::error::{BoundError, Result};
use crate::geometry::{DerivedQuantities, Domain};
use crate::lemmas::{remark_f_bound, Grid};

/// Largest k a sweep may request.
pub const MAX_K: u64 = 100_000;
const FD_MAX_NODES: usize = 40_000;

fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(BoundError::Config(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DomainSpec {
    Rectangle { sides: Vec<f64> },
    Ball { n: usize, radius: f64 },
    Explicit { n: usize, volume: f64, inertia: f64 },
}

impl DomainSpec {
    pub fn unit_square() -> Self {
        DomainSpec::Rectangle { sides: vec![1.0, 1.0] }
    }

    pub fn unit_disk() -> Self {
        DomainSpec::Ball { n: 2, radius: 1.0 }
    }

    pub fn n(&self) -> usize {
        match self {
            DomainSpec::Rectangle { sides } => sides.len(),
            DomainSpec::Ball { n, .. } | DomainSpec::Explicit { n, .. } => *n,
        }
    }

    pub fn build(&self) -> Result<Domain> {
        let d = match self {
            DomainSpec::Rectangle { sides } => Domain::rectangle(sides),
            DomainSpec::Ball { n, radius } => Domain::ball(*n, *radius),
            DomainSpec::Explicit { n, volume, inertia } => Domain::explicit(*n, *volume, *inertia),
        };
        d.map_err(|e| BoundError::Config(format!("domain: {e}")))
    }
}

/// `rectangle:1,1`, `ball:2:1.0` or `explicit:2:1.0:0.1667`; `square` and `disk` are shorthands.
impl FromStr for DomainSpec {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| BoundError::Config(format!("bad number '{x}' in domain '{s}'")));
        let int = |x: &str| x.trim().parse::<usize>().map_err(|_| BoundError::Config(format!("bad dimension '{x}' in domain '{s}'")));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["square"] => Ok(DomainSpec::unit_square()),
            ["disk"] => Ok(DomainSpec::unit_disk()),
            ["rectangle", sides] => Ok(DomainSpec::Rectangle { sides: sides.split(',').map(num).collect::<Result<_>>()? }),
            ["ball", n, r] => Ok(DomainSpec::Ball { n: int(n)?, radius: num(r)? }),
            ["explicit", n, v, i] => Ok(DomainSpec::Explicit { n: int(n)?, volume: num(v)?, inertia: num(i)? }),
            _ => config(format!("cannot parse domain '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    #[default]
    Richardson,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSpec {
    #[default]
    ClosedForm,
    Fd {
        h: f64,
        #[serde(default)]
        refinement: Refinement,
    },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => config(format!("unknown format '{s}' (csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    LiYau,
    Melas,
    Ilyin,
    Yy,
    JxL1,
    LevineProtter,
    Cswz,
    JxL2,
    Cqw,
    Thm,
    ThmN2,
    ThmN3,
    ThmN4,
    ThmHighdim,
    ThmUnrestricted,
    #[serde(alias = "master_bound")]
    Master,
    Recomputed,
    Stokes,
    RemarkF,
}

impl BoundId {
    pub const ALL: [BoundId; 19] = [
        BoundId::LiYau,
        BoundId::Melas,
        BoundId::Ilyin,
        BoundId::Yy,
        BoundId::JxL1,
        BoundId::LevineProtter,
        BoundId::Cswz,
        BoundId::JxL2,
        BoundId::Cqw,
        BoundId::Thm,
        BoundId::ThmN2,
        BoundId::ThmN3,
        BoundId::ThmN4,
        BoundId::ThmHighdim,
        BoundId::ThmUnrestricted,
        BoundId::Master,
        BoundId::Recomputed,
        BoundId::Stokes,
        BoundId::RemarkF,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::LiYau => "li_yau",
            BoundId::Melas => "melas",
            BoundId::Ilyin => "ilyin",
            BoundId::Yy => "yy",
            BoundId::JxL1 => "jx_l1",
            BoundId::LevineProtter => "levine_protter",
            BoundId::Cswz => "cswz",
            BoundId::JxL2 => "jx_l2",
            BoundId::Cqw => "cqw",
            BoundId::Thm => "thm",
            BoundId::ThmN2 => "thm_n2",
            BoundId::ThmN3 => "thm_n3",
            BoundId::ThmN4 => "thm_n4",
            BoundId::ThmHighdim => "thm_highdim",
            BoundId::ThmUnrestricted => "thm_unrestricted",
            BoundId::Master => "master",
            BoundId::Recomputed => "recomputed",
            BoundId::Stokes => "stokes",
            BoundId::RemarkF => "remark_f",
        }
    }

    /// The order l a bound is stated for, when it is tied to one.
    pub fn fixed_order(self) -> Option<u32> {
        match self {
            BoundId::LiYau | BoundId::Melas | BoundId::Ilyin | BoundId::Yy | BoundId::JxL1 | BoundId::Stokes => Some(1),
            BoundId::LevineProtter | BoundId::Cswz | BoundId::JxL2 => Some(2),
            _ => None,
        }
    }

    /// Whether the bound is about the Dirichlet poly-Laplacian spectrum the oracle computes.
    pub fn comparable(self) -> bool {
        self != BoundId::Stokes
    }

    /// The earlier bound this one was introduced to improve.
    pub fn predecessor(self, l: u32) -> Option<BoundId> {
        match self {
            BoundId::Melas => Some(BoundId::LiYau),
            BoundId::Ilyin | BoundId::Yy => Some(BoundId::Melas),
            BoundId::JxL1 => Some(BoundId::Yy),
            BoundId::Cswz | BoundId::JxL2 => Some(BoundId::LevineProtter),
            BoundId::Cqw if l == 1 => Some(BoundId::LiYau),
            BoundId::Cqw if l == 2 => Some(BoundId::LevineProtter),
            BoundId::Thm
            | BoundId::ThmN2
            | BoundId::ThmN3
            | BoundId::ThmN4
            | BoundId::ThmHighdim
            | BoundId::ThmUnrestricted => Some(BoundId::Cqw),
            _ => None,
        }
    }

    pub fn evaluate(self, d: &DerivedQuantities, l: u32, k: u64, opts: &BoundOptions) -> Result<BoundResult> {
        Ok(match self {
            BoundId::LiYau => li_yau(d, k),
            BoundId::Melas => melas(d, k),
            BoundId::Ilyin => ilyin(d, k),
            BoundId::Yy => yy(d, k),
            BoundId::JxL1 => jx_l1(d, k),
            BoundId::LevineProtter => levine_protter(d, k),
            BoundId::Cswz => cswz(d, k, opts.cswz_alpha)?,
            BoundId::JxL2 => jx_l2(d, k),
            BoundId::Cqw => cqw(d, l, k),
            BoundId::Thm => thm_for(d, l, k)?,
            BoundId::ThmN2 => thm_n2(d, l, k)?,
            BoundId::ThmN3 => thm_n3(d, l, k)?,
            BoundId::ThmN4 => thm_n4(d, l, k)?,
            BoundId::ThmHighdim => thm_highdim(d, l, k)?,
            BoundId::ThmUnrestricted => thm_unrestricted(d, l, k)?,
            BoundId::Master => master_bound(d, l, k)?,
            BoundId::Recomputed => recomputed_bound(d, l, k)?,
            BoundId::Stokes => stokes_bound(d, k)?,
            BoundId::RemarkF => remark_f_bound(d, l, opts.remark_m, k)?,
        })
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundId {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self> {
        let s = if s == "master_bound" { "master" } else { s };
        BoundId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| BoundError::Config(format!("unknown bound '{s}'")))
    }
}

/// Parameters of bounds that take more than (d, l, k).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundOptions {
    pub cswz_alpha: f64,
    pub remark_m: u32,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { cswz_alpha: 0.99, remark_m: 0 }
    }
}

fn default_l() -> u32 {
    1
}

fn default_cswz_alpha() -> f64 {
    0.99
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub domain: DomainSpec,
    #[serde(default = "default_l")]
    pub l: u32,
    /// Inclusive [k_min, k_max].
    pub k_range: [u64; 2],
    pub bounds: Vec<BoundId>,
    #[serde(default)]
    pub oracle: OracleSpec,
    #[serde(default)]
    pub output: Format,
    #[serde(default)]
    pub seed: u64,
    /// Relative slack allowed before a bound counts as exceeding the oracle;
    /// 1e-9 for closed forms and 1% for finite differences when absent.
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default = "default_cswz_alpha")]
    pub cswz_alpha: f64,
    #[serde(default)]
    pub remark_m: u32,
}

impl SweepConfig {
    pub fn new(domain: DomainSpec, l: u32, k_range: [u64; 2], bounds: Vec<BoundId>, oracle: OracleSpec) -> Self {
        SweepConfig {
            domain,
            l,
            k_range,
            bounds,
            oracle,
            output: Format::Csv,
            seed: 0,
            tolerance: None,
            cswz_alpha: default_cswz_alpha(),
            remark_m: 0,
        }
    }

    /// Every bound stated for order `l`.
    pub fn bounds_for_order(l: u32) -> Vec<BoundId> {
        BoundId::ALL.into_iter().filter(|b| b.fixed_order().map_or(true, |o| o == l)).collect()
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| BoundError::Config(format!("{e}")))?;
        table.remove("audit");
        table.try_into().map_err(|e: toml::de::Error| BoundError::Config(e.message().to_string()))
    }

    pub fn options(&self) -> BoundOptions {
        BoundOptions { cswz_alpha: self.cswz_alpha, remark_m: self.remark_m }
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(match self.oracle {
            OracleSpec::Fd { .. } => 0.01,
            _ => 1e-9,
        })
    }

    pub fn ks(&self) -> std::ops::RangeInclusive<u64> {
        self.k_range[0]..=self.k_range[1]
    }

    /// Checks everything that can be checked without computing a spectrum.
    pub fn validate(&self) -> Result<Domain> {
        let [lo, hi] = self.k_range;
        if lo == 0 || lo > hi {
            return config(format!("k_range [{lo}, {hi}] must be non-empty and start at 1 or above"));
        }
        if hi > MAX_K {
            return config(format!("k_max = {hi} exceeds {MAX_K}"));
        }
        if self.l == 0 {
            return config("l must be at least 1");
        }
        if self.bounds.is_empty() {
            return config("bounds list is empty");
        }
        let mut seen = self.bounds.clone();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return config("bounds list has duplicates");
        }
        for b in &self.bounds {
            if let Some(o) = b.fixed_order() {
                if o != self.l {
                    return config(format!("{b} is a bound for l = {o}, the sweep has l = {}", self.l));
                }
            }
        }
        if !(self.cswz_alpha > 0.0 && self.cswz_alpha < 1.0) {
            return config(format!("cswz_alpha must lie in (0, 1), got {}", self.cswz_alpha));
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return config(format!("tolerance must be finite and non-negative, got {t}"));
            }
        }
        let domain = self.domain.build()?;
        self.check_oracle(hi)?;
        Ok(domain)
    }

    fn check_oracle(&self, k_max: u64) -> Result<()> {
        match (self.oracle, &self.domain) {
            (OracleSpec::None, _) => Ok(()),
            (OracleSpec::ClosedForm, _) if self.l != 1 => {
                config(format!("no closed-form spectrum for l = {}; use an fd oracle", self.l))
            }
            (OracleSpec::ClosedForm, DomainSpec::Rectangle { .. }) => Ok(()),
            (OracleSpec::ClosedForm, DomainSpec::Ball { n, .. }) if *n == 2 || *n == 3 => Ok(()),
            (OracleSpec::ClosedForm, DomainSpec::Ball { n, .. }) => config(format!("no closed-form ball spectrum for n = {n}")),
            (OracleSpec::ClosedForm, DomainSpec::Explicit { .. }) => config("an explicit domain has no spectrum oracle"),
            (OracleSpec::Fd { h, refinement }, DomainSpec::Rectangle { sides }) => {
                if !(h > 0.0 && h.is_finite()) {
                    return config(format!("fd step h must be positive, got {h}"));
                }
                let finest = if refinement == Refinement::Richardson { h / 2.0 } else { h };
                let mut coarse_nodes = 1usize;
                let mut fine_nodes = 1usize;
                for a in sides {
                    let m = a / h;
                    if (m - m.round()).abs() > 1e-9 * m.max(1.0) || m.round() < 2.0 {
                        return config(format!("fd step h = {h} does not divide side {a}"));
                    }
                    coarse_nodes = coarse_nodes.saturating_mul(m.round() as usize - 1);
                    fine_nodes = fine_nodes.saturating_mul((a / finest).round() as usize - 1);
                }
                if fine_nodes > FD_MAX_NODES {
                    return config(format!("fd grid has {fine_nodes} interior nodes, the limit is {FD_MAX_NODES}"));
                }
                if k_max as usize > coarse_nodes {
                    return config(format!("k_max = {k_max} exceeds the {coarse_nodes} nodes of the coarse fd grid"));
                }
                Ok(())
            }
            (OracleSpec::Fd { .. }, _) => config("fd oracles need a rectangle domain"),
        }
    }
}

fn default_sets() -> usize {
    50
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditConfig {
    #[serde(default = "default_grid")]
    pub grid: Grid,
    #[serde(default)]
    pub seed: u64,
    /// Random constraint sets for the moment-lemma comparison.
    #[serde(default = "default_sets")]
    pub moment_sets: usize,
}

fn default_grid() -> Grid {
    Grid::Fine
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig { grid: Grid::Fine, seed: 0, moment_sets: 50 }
    }
}

impl AuditConfig {
    /// Reads the optional `[audit]` table; everything else in the file is ignored.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e| BoundError::Config(format!("{e}")))?;
        match table.remove("audit") {
            Some(v) => v.try_into().map_err(|e: toml::de::Error| BoundError::Config(e.message().to_string())),
            None => Ok(AuditConfig::default()),
        }
    }
}
