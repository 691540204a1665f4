//! Earlier lower bounds for Σ_{j≤k} λ_j on the unit square and unit disk.

use polybound::classical::{cqw, ilyin, jx_l1, li_yau, melas, yy, BoundResult};
use polybound::geometry::Domain;

fn main() -> anyhow::Result<()> {
    for (name, dom) in [("unit square", Domain::unit_square()), ("unit disk", Domain::unit_disk())] {
        let d = dom.derived();
        println!("{name}: V = {:.6}, I = {:.6}", d.volume, d.inertia);
        println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}", "k", "li_yau", "melas", "ilyin", "yy", "jx_l1", "cqw");
        for k in [1, 10, 100, 1000] {
            let row: [BoundResult; 6] = [li_yau(&d, k), melas(&d, k), ilyin(&d, k), yy(&d, k), jx_l1(&d, k), cqw(&d, 1, k)];
            let cells: Vec<String> = row
                .iter()
                .map(|r| if r.valid { format!("{:>12.4}", r.value) } else { format!("{:>12}", "n/a") })
                .collect();
            println!("{k:>6} {}", cells.join(" "));
        }
    }
    Ok(())
}
