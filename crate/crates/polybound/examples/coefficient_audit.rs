//! Re-derive every displayed constant of the low-dimensional theorems and
//! print the verdicts.

use polybound::deep::{audit_coefficients, Verdict};

fn main() -> anyhow::Result<()> {
    let audit = audit_coefficients()?;
    for e in &audit.entries {
        println!("{:<12} {:<45} {:<40} derived={:<28} {}", format!("{:?}", e.verdict), e.id, e.printed, e.derived, e.detail);
    }
    println!();
    for v in [Verdict::Match, Verdict::Conservative, Verdict::Mismatch, Verdict::Holds, Verdict::Fails] {
        println!("{v:?}: {}", audit.count(v));
    }
    println!("inventory coverage: {:.1}%", 100.0 * audit.coverage_fraction());
    Ok(())
}
