//! Sweeps of bounds against spectra, the combined audit document, and their
//! JSON/CSV forms.

mod audit;
mod config;
mod output;
mod sweep;

pub use audit::{audit, AuditReport};
pub use config::{AuditConfig, BoundId, BoundOptions, DomainSpec, Format, OracleSpec, Refinement, SweepConfig, MAX_K};
pub use output::{from_csv, from_json, key_value_csv, to_csv, to_json, Envelope, SCHEMA_VERSION};
pub use sweep::{oracle_spectrum, polya_check, run_sweep, BoundSummary, ComparisonReport, Overtake, PolyaCheck, SweepRow};
