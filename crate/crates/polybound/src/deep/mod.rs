//! Deep lower bounds: the low- and high-dimensional theorems, the
//! unrestricted bound, their k-thresholds and a coefficient audit.

pub mod audit;
pub mod laurent;
mod theorems;
mod thresholds;

pub(crate) use crate::critical::rat_to_f64;

pub use audit::{audit_coefficients, audit_single, printed_bracket, AuditEntry, BracketEntry, CoefficientAudit, Verdict};
pub use theorems::{
    display_terms, generalized_polya, recomputed_bound, stokes_bound, thm_for, thm_highdim, thm_n2, thm_n3, thm_n4,
    thm_unrestricted, thm_unrestricted_variant, CompositeOperator, DisplayTerm, FifthExponent, Theorem,
};
pub use thresholds::{binom, highdim_root_thresholds, thresholds, Threshold, ThresholdSet};
