//! Root of (t+1)^{n+1} − t^{n+1} = Q and the branch lower estimates, n = 2..8.

use polybound::critical::{root_lower_estimate, solve_root};

fn main() -> anyhow::Result<()> {
    println!("{:>2} {:>10} {:>14} {:>14} {:>10}  branch", "n", "Q", "root", "lower", "gap");
    for n in 2..=8 {
        for q in [1e3, 1e6, 1e9] {
            let t = solve_root(n, q)?;
            let e = root_lower_estimate(n, q)?;
            match (e.t_lower, e.branch) {
                (Some(lo), Some(b)) => println!("{n:>2} {q:>10.0e} {t:>14.8} {lo:>14.8} {:>10.2e}  {}", t - lo, b.as_str()),
                _ => println!("{n:>2} {q:>10.0e} {t:>14.8} {:>14} {:>10}  {}", "-", "-", e.note.unwrap_or_default()),
            }
        }
    }
    Ok(())
}
