//! The new theorems, their k thresholds, and how they compare with the
//! master bound they expand, across dimensions and orders. Ratios above 1
//! are cases where a display sits above the master bound.

use polybound::critical::master_bound;
use polybound::deep::{generalized_polya, stokes_bound, thm_for, thm_unrestricted, thresholds, CompositeOperator};
use polybound::geometry::Domain;

fn main() -> anyhow::Result<()> {
    println!("{:>2} {:>2} {:>12} {:>14} {:>14} {:>14}", "n", "l", "k_required", "thm/master", "unres/master", "k");
    for n in 2..=6 {
        let d = Domain::ball(n, 1.0)?.derived();
        for l in 1..=3 {
            let th = thresholds(n, l)?;
            let k = (th.k_required().max(1.0) * 10.0).min(1e17) as u64;
            let m = master_bound(&d, l, k)?.value;
            let ratio = |r: polybound::classical::BoundResult| if r.valid { format!("{:.8}", r.value / m) } else { "n/a".into() };
            println!(
                "{n:>2} {l:>2} {:>12.3e} {:>14} {:>14} {k:>14}",
                th.k_required(),
                ratio(thm_for(&d, l, k)?),
                ratio(thm_unrestricted(&d, l, k)?)
            );
        }
    }

    let square = Domain::unit_square().derived();
    let op = CompositeOperator::new(0, vec![1.0, 0.5])?;
    println!("(-Δ) + ½Δ² on the unit square, k = 50: {:.4}", generalized_polya(&op, &square, 50)?.value);
    let cube = Domain::rectangle(&[1.0, 1.0, 1.0])?.derived();
    println!("Stokes substitution on the unit cube, k = 50: {:.4}", stokes_bound(&cube, 50)?.value);
    Ok(())
}
