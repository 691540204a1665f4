//! Brute-force scans of the polynomial inequality, convexity of g, and the
//! moment lemma against a discretised minimiser.

use std::time::Instant;

use polybound::lemmas::{
    moment_chain_audit, scan_g_convexity, scan_polynomial, scan_moment_lemma, solve_profile_offset, Grid, PolyParams,
};

fn main() -> anyhow::Result<()> {
    let t = Instant::now();
    let poly = scan_polynomial(Grid::Fine, 7);
    println!(
        "polynomial inequality: {} evaluations, {} violations in {} of {} cells, min normalised residual {:.3e} at {:?}",
        poly.evaluations, poly.violations, poly.violating_cells, poly.cells, poly.min_normalised, poly.argmin
    );
    println!(
        "  restricted to d >= m + 1: min {:.3e}, {} violations; |g(1)| <= {:.1e}, |g'(1)| <= {:.1e} ({:.1?})",
        poly.min_normalised_d_ge_m_plus_1,
        poly.violations_d_ge_m_plus_1,
        poly.max_abs_g_at_1,
        poly.max_abs_g_prime_at_1,
        t.elapsed()
    );

    let t = Instant::now();
    let conv = scan_g_convexity(Grid::Fine);
    println!(
        "g convex right of t0: {} ({} points, min normalised {:.3e}); t0 >= 1 in {} cells ({:.1?})",
        if conv.passed { "yes" } else { "no" },
        conv.evaluations,
        conv.min_normalised,
        conv.t0_not_below_one,
        t.elapsed()
    );

    let p = PolyParams::new(5.0, 2.0, 0)?;
    println!("t0(d=5, q=2, m=0) = {:.6}", polybound::lemmas::g_inflection(&p));
    println!("profile offset for n=2, nA=7/3: {}", solve_profile_offset(2, 7.0 / 3.0)?);

    let t = Instant::now();
    let l52 = scan_moment_lemma(Grid::Coarse, 50, 11)?;
    println!(
        "moment lemma vs brute force: {} of {} sets exceed the minimum by more than 1%, worst ratio {:.3} (n={}, l={}, nA={:.3}) ({:.1?})",
        l52.violations,
        l52.sets,
        l52.worst_ratio,
        l52.worst.n,
        l52.worst.l,
        l52.worst.normalised_moment,
        t.elapsed()
    );
    println!(
        "  derived fifth exponent: {} sets above the exact minimum, {} of them with n >= 5",
        l52.derived_violations, l52.derived_violations_n_ge_5
    );
    for e in moment_chain_audit().iter().filter(|e| !e.id.contains("expansion/")) {
        println!("  {:?} {}: {} | {}", e.verdict, e.id, e.printed, e.derived);
    }
    Ok(())
}
