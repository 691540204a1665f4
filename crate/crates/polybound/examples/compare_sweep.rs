//! A configured sweep: bounds against the exact spectrum of a 1×2 rectangle,
//! written as CSV rows and a JSON report.

use polybound::report::{run_sweep, to_csv, to_json, BoundId, DomainSpec, OracleSpec, SweepConfig};

fn main() -> anyhow::Result<()> {
    let cfg = SweepConfig::from_toml(
        r#"
l = 1
k_range = [1, 200]
bounds = ["li_yau", "melas", "ilyin", "jx_l1", "cqw", "master"]
oracle = "closed_form"

[domain]
shape = "rectangle"
sides = [1.0, 2.0]
"#,
    )?;
    let r = run_sweep(&cfg)?;
    for s in &r.summary {
        println!(
            "{:<10} violations {:>2}  min relative slack {:.4}",
            s.bound_id,
            s.violations,
            s.min_relative_slack.unwrap_or(f64::NAN)
        );
    }
    for o in &r.overtakes {
        println!("{} first exceeds {} at k = {:?}", o.bound_id, o.predecessor, o.first_k);
    }
    if let Some(p) = &r.polya {
        println!("Pólya: {} checked, min ratio {:.4} at k = {}", p.checked, p.min_ratio, p.min_ratio_k);
    }

    let csv = to_csv(&r.rows)?;
    println!("{} CSV lines; first row: {}", csv.lines().count(), csv.lines().nth(1).unwrap_or(""));

    let small = SweepConfig::new(DomainSpec::unit_disk(), 1, [1, 3], vec![BoundId::LiYau], OracleSpec::ClosedForm);
    print!("{}", to_json("compare", &run_sweep(&small)?)?);
    Ok(())
}
