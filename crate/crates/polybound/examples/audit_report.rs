//! The combined audit: coefficient verdicts plus the three lemma scans, on
//! the coarse grid.

use polybound::lemmas::Grid;
use polybound::report::{audit, AuditConfig};

fn main() -> anyhow::Result<()> {
    let r = audit(&AuditConfig { grid: Grid::Coarse, seed: 11, moment_sets: 20 })?;
    for (verdict, count) in &r.verdict_counts {
        println!("{verdict:?}: {count}");
    }
    println!("coverage {:.0}% of {} entries", 100.0 * r.coverage_fraction, r.entries().count());
    println!(
        "polynomial inequality: {} violations; g convex: {}; moment lemma: {} of {} sets violated",
        r.polynomial_inequality.violations, r.g_convexity.passed, r.moment_lemma.violations, r.moment_lemma.sets
    );
    println!("all scans passed: {}", r.scans_passed());
    Ok(())
}
