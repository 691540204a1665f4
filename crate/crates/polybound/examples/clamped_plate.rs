//! Clamped plate (l = 2): finite-difference spectrum of the unit square with
//! Richardson extrapolation, compared with the l = 2 bounds; then a cube for
//! the bound that needs n >= 3.

use std::time::Instant;

use polybound::report::{run_sweep, BoundId, DomainSpec, OracleSpec, Refinement, SweepConfig};

fn main() -> anyhow::Result<()> {
    let t = Instant::now();
    let square = SweepConfig::new(
        DomainSpec::unit_square(),
        2,
        [1, 50],
        vec![BoundId::LevineProtter, BoundId::Cswz, BoundId::ThmN2, BoundId::ThmUnrestricted],
        OracleSpec::Fd { h: 1.0 / 40.0, refinement: Refinement::Richardson },
    );
    let r = run_sweep(&square)?;
    let lam1 = r.rows[0].oracle_sum.unwrap_or(f64::NAN);
    println!("clamped unit square: lambda_1 = {lam1:.3} ({:.1?})", t.elapsed());
    for s in &r.summary {
        println!(
            "  {:<17} valid {:>2}/50  min relative slack {:>9.5}  violations {}",
            s.bound_id,
            s.valid_rows,
            s.min_relative_slack.unwrap_or(f64::NAN),
            s.violations
        );
    }

    let t = Instant::now();
    let cube = SweepConfig::new(
        DomainSpec::Rectangle { sides: vec![1.0, 1.0, 1.0] },
        2,
        [1, 50],
        vec![BoundId::LevineProtter, BoundId::JxL2, BoundId::Cswz],
        OracleSpec::Fd { h: 1.0 / 8.0, refinement: Refinement::Richardson },
    );
    let r = run_sweep(&cube)?;
    println!("clamped unit cube: lambda_1 = {:.1} ({:.1?})", r.rows[0].oracle_sum.unwrap_or(f64::NAN), t.elapsed());
    for s in &r.summary {
        println!(
            "  {:<17} min relative slack {:>9.5}  violations {}",
            s.bound_id,
            s.min_relative_slack.unwrap_or(f64::NAN),
            s.violations
        );
    }
    println!("report {}", if r.passed { "passed" } else { "FAILED" });
    Ok(())
}
