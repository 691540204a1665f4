//! Acceptance suite: ten numbered criteria, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_FAILURES` are stated claims that the brute-force
//! checks refute; they must keep failing (a pass would mean the check changed),
//! and every other criterion must pass.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use polybound::critical::{root_n2, solve_root, Branch};
use polybound::deep::{audit_coefficients, Verdict};
use polybound::lemmas::{scan_polynomial, scan_moment_lemma, Grid};
use polybound::oracles::{ball_spectrum, rectangle_spectrum};
use polybound::report::{
    audit, to_csv, to_json, AuditConfig, BoundId, DomainSpec, OracleSpec, Refinement, SweepConfig,
};

/// Claims refuted by the scans: the polynomial inequality for m > d − 1 (3)
/// and the printed moment lemma against the discretised minimum (9).
const KNOWN_FAILURES: &[u32] = &[3, 9];

const POLY_MIN_RESIDUAL: f64 = -1e-9;
const STATIONARY_TOL: f64 = 1e-10;
const SOUNDNESS_TOL: f64 = 1e-9;
const FD_SLACK: f64 = 0.01;
const MOMENT_SLACK: f64 = 0.01;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

fn rpow(x: &BigRational, e: u32) -> BigRational {
    num_traits::pow(x.clone(), e as usize)
}

fn logspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
}

fn criterion_1() -> Outcome {
    let mut worst_unit = 0.0f64;
    for n in 2..=12usize {
        let q = 2f64.powi(n as i32 + 1) - 1.0;
        worst_unit = worst_unit.max((solve_root(n, q).unwrap() - 1.0).abs());
    }
    // 3t² + 3t + 1 = Q by bisection on f64 bits
    let bisect = |q: f64| {
        let (mut lo, mut hi) = (0.0f64, q.sqrt());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if 3.0 * mid * mid + 3.0 * mid + 1.0 < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let worst_n2 = logspace(24.0, 1e10, 200)
        .map(|q| {
            let b = bisect(q);
            (root_n2(q) - b).abs() / b.max(1.0)
        })
        .fold(0.0, f64::max);
    outcome(
        worst_unit <= 1e-12 && worst_n2 <= 1e-12,
        format!("max |t - 1| = {worst_unit:.1e} over n in [2,12]; n=2 closed form vs bisection max rel diff {worst_n2:.1e}"),
    )
}

fn criterion_2() -> Outcome {
    let mut cases: Vec<(Branch, usize)> = vec![(Branch::N3, 3), (Branch::N4, 4), (Branch::N5, 5), (Branch::N6, 6)];
    cases.extend((5..=12).map(|n| (Branch::HighDim, n)));
    let mut points = 0;
    let mut violations = Vec::new();
    for (b, n) in cases {
        let nf = n as f64;
        let q_thr = b.q_threshold(n);
        let tbar_thr = ((q_thr.ln() - (nf + 1.0).ln()) / nf).exp() * (1.0 + 1e-9);
        for tb in logspace(tbar_thr, tbar_thr * 1e4, 200) {
            let tbar = rat(tb);
            let q = BigRational::from_integer(BigInt::from(n + 1)) * rpow(&tbar, n as u32);
            let qf = q.to_f64().unwrap();
            let admitted = if b == Branch::N3 { qf > q_thr } else { qf >= q_thr };
            assert!(admitted, "grid point below the branch threshold");
            points += 1;
            let t = b.eval_exact(n, &tbar);
            // S_{n+1} is increasing on t >= 0, so t <= root iff S_{n+1}(t) <= Q
            if t.is_positive() {
                let s = rpow(&(&t + BigRational::one()), n as u32 + 1) - rpow(&t, n as u32 + 1);
                if s > q {
                    violations.push(format!("{}(n={n}) at Q={qf:.3e}", b.as_str()));
                }
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("{points} exact points over 12 (branch, n) pairs, {} violations {:?}", violations.len(), violations.first()),
    )
}

/// Exact residual for integer d and q.
fn exact_poly_residual(d: u32, q: u32, m: u32, s: f64, tau: f64) -> BigRational {
    let (s, tau) = (rat(s), rat(tau));
    let dd = d + q;
    let diff2 = rpow(&(&s - &tau), 2);
    let mut sum = BigRational::zero();
    for j in 0..=m {
        sum += BigRational::from_integer(BigInt::from(j + 1)) * rpow(&s, j) * rpow(&tau, dd - 2 - j) * &diff2;
    }
    let c = |x: u32| BigRational::from_integer(BigInt::from(x));
    c(d) * rpow(&s, dd) - (c(dd) * rpow(&s, d) * rpow(&tau, q) - c(q) * rpow(&tau, dd) + c(q) * sum)
}

fn criterion_3() -> Outcome {
    let scan = scan_polynomial(Grid::Fine, 7);
    let w = scan.argmin;
    let exact = if w.d.fract() == 0.0 && w.q.fract() == 0.0 {
        format!("{:.3e}", exact_poly_residual(w.d as u32, w.q as u32, w.m, w.s, w.tau).to_f64().unwrap())
    } else {
        "n/a".into()
    };
    let passed = scan.evaluations >= 1_000_000
        && scan.min_normalised >= POLY_MIN_RESIDUAL
        && scan.random_sets == 100
        && scan.max_abs_g_at_1 <= STATIONARY_TOL
        && scan.max_abs_g_prime_at_1 <= STATIONARY_TOL;
    outcome(
        passed,
        format!(
            "{} points, {} below {POLY_MIN_RESIDUAL:e} in {} of {} cells; min normalised {:.3e} at d={}, q={}, m={}, s={:.4}, tau={:.1} (exact residual there {exact}); cells with d >= m+1: min {:.1e}; |g(1)| <= {:.1e}, |g'(1)| <= {:.1e} over {} random sets",
            scan.evaluations,
            scan.violations,
            scan.violating_cells,
            scan.cells,
            scan.min_normalised,
            w.d,
            w.q,
            w.m,
            w.s,
            w.tau,
            scan.min_normalised_d_ge_m_plus_1,
            scan.max_abs_g_at_1,
            scan.max_abs_g_prime_at_1,
            scan.random_sets
        ),
    )
}

/// Dirichlet eigenvalues π²(a² + b²) of the unit square, enumerated directly.
fn square_sums(k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (1..=40u64).flat_map(|a| (1..=40u64).map(move |b| PI * PI * (a * a + b * b) as f64)).collect();
    v.sort_by(f64::total_cmp);
    v.iter()
        .take(k)
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let bounds = vec![
        BoundId::LiYau,
        BoundId::Melas,
        BoundId::Ilyin,
        BoundId::Yy,
        BoundId::JxL1,
        BoundId::Cqw,
        BoundId::ThmN2,
        BoundId::ThmUnrestricted,
        BoundId::Master,
    ];
    let square_ref = square_sums(200);
    let lib_square = rectangle_spectrum(&[1.0, 1.0], 1, 200).unwrap().partial_sums();
    let oracle_gap = square_ref.iter().zip(&lib_square).map(|(a, b)| (a - b).abs() / a).fold(0.0, f64::max);
    // first disk eigenvalues j_{0,1}², j_{1,1}² (twice), j_{2,1}² from tables
    let disk = ball_spectrum(2, 1.0, 200).unwrap();
    let anchors = [2.404825557695773, 3.831705970207512, 3.831705970207512, 5.135622301840683];
    let anchor_gap = anchors.iter().zip(&disk.eigenvalues).map(|(j, l)| (j * j - l).abs() / l).fold(0.0, f64::max);

    let mut compared = 0;
    let mut violations = Vec::new();
    let mut skipped = Vec::new();
    for (name, domain, sums) in [
        ("square", DomainSpec::unit_square(), square_ref.clone()),
        ("disk", DomainSpec::unit_disk(), disk.partial_sums()),
    ] {
        let cfg = SweepConfig::new(domain, 1, [1, 200], bounds.clone(), OracleSpec::None);
        let r = polybound::report::run_sweep(&cfg).unwrap();
        for row in &r.rows {
            if !row.valid {
                continue;
            }
            compared += 1;
            let o = sums[row.k as usize - 1];
            if row.value > o * (1.0 + SOUNDNESS_TOL) {
                violations.push(format!("{name}/{}/k={}", row.bound_id, row.k));
            }
        }
        for s in r.summary.iter().filter(|s| s.valid_rows == 0) {
            skipped.push(format!("{name}/{}", s.bound_id));
        }
    }
    outcome(
        violations.is_empty() && oracle_gap < 1e-12 && anchor_gap < 1e-12,
        format!(
            "{compared} valid (domain, bound, k) cells, {} violations {:?}; not applicable: {:?}; square oracle gap {oracle_gap:.0e}, disk zero gap {anchor_gap:.0e}",
            violations.len(),
            violations.first(),
            skipped
        ),
    )
}

fn criterion_5() -> Outcome {
    let square = SweepConfig::new(
        DomainSpec::unit_square(),
        2,
        [1, 50],
        vec![BoundId::LevineProtter, BoundId::Cswz, BoundId::ThmN2, BoundId::ThmUnrestricted],
        OracleSpec::Fd { h: 1.0 / 40.0, refinement: Refinement::Richardson },
    );
    let cube = SweepConfig::new(
        DomainSpec::Rectangle { sides: vec![1.0, 1.0, 1.0] },
        2,
        [1, 50],
        vec![BoundId::LevineProtter, BoundId::JxL2],
        OracleSpec::Fd { h: 1.0 / 8.0, refinement: Refinement::Richardson },
    );
    let mut bad = Vec::new();
    let mut valid = 0;
    let mut lam1 = f64::NAN;
    for (name, mut cfg) in [("square", square), ("cube", cube)] {
        cfg.tolerance = Some(FD_SLACK);
        let r = polybound::report::run_sweep(&cfg).unwrap();
        if name == "square" {
            lam1 = r.rows[0].oracle_sum.unwrap();
        }
        valid += r.rows.iter().filter(|x| x.sound.is_some()).count();
        bad.extend(r.rows.iter().filter(|x| x.sound == Some(false)).map(|x| format!("{name}/{}/k={}", x.bound_id, x.k)));
        let missing: Vec<_> = r.summary.iter().filter(|s| s.compared_rows == 0).map(|s| s.bound_id.clone()).collect();
        bad.extend(missing.into_iter().map(|b| format!("{name}/{b} never valid")));
    }
    outcome(
        bad.is_empty() && (1280.0..=1310.0).contains(&lam1),
        format!("clamped square lambda_1 = {lam1:.3}; {valid} compared cells within {FD_SLACK} slack, problems: {:?}", bad),
    )
}

fn criterion_6() -> Outcome {
    let disk = ball_spectrum(2, 1.0, 500).unwrap();
    // ω₂V = π², so the Weyl level is 4k
    let (worst_k, worst) = disk
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, l)| (i + 1, l / (4.0 * (i + 1) as f64)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    outcome(
        disk.len() == 500 && worst >= 1.0,
        format!("min lambda_k / (4 pi^2 k / (omega_2 V)) = {worst:.6} at k = {worst_k} over k in [1, 500]"),
    )
}

fn criterion_7() -> Outcome {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in 2..=12i64 {
        for l in 1..=6i64 {
            let old = r(l, 24 * (n + 2 * l));
            if n >= 5 {
                checked += 1;
                if r(n * l, 12) <= old {
                    failures.push(format!("restricted n={n} l={l}"));
                }
            }
            if 2 * l + n >= 6 {
                checked += 1;
                if r(5 * l, 2 * (2 * l + n)) <= old {
                    failures.push(format!("unrestricted n={n} l={l}"));
                }
            }
        }
    }
    outcome(failures.is_empty(), format!("{checked} exact comparisons, failures {:?}", failures))
}

fn criterion_8() -> Outcome {
    let a = audit_coefficients().unwrap();
    let required = ["145252", "649", "5284", "248832"];
    let missing: Vec<&str> = required.iter().copied().filter(|c| a.with_printed(c).next().is_none()).collect();
    // constants need both values; stated inequalities carry their evidence in the detail
    let incomplete = a
        .entries
        .iter()
        .filter(|e| match e.verdict {
            Verdict::Match | Verdict::Conservative | Verdict::Mismatch => e.printed.is_empty() || e.derived.is_empty(),
            Verdict::Holds | Verdict::Fails => e.printed.is_empty() || e.detail.is_empty(),
        })
        .count();
    let verdicts: Vec<String> = required
        .iter()
        .filter_map(|c| a.with_printed(c).next().map(|e| format!("{c}: {:?}", e.verdict)))
        .collect();
    outcome(
        a.coverage_fraction() == 1.0 && missing.is_empty() && incomplete == 0,
        format!(
            "{} entries ({} constants, {} stated inequalities), coverage {:.0}%, incomplete entries {incomplete}; {}",
            a.entries.len(),
            a.count(Verdict::Match) + a.count(Verdict::Conservative) + a.count(Verdict::Mismatch),
            a.count(Verdict::Holds) + a.count(Verdict::Fails),
            100.0 * a.coverage_fraction(),
            verdicts.join(", ")
        ),
    )
}

fn criterion_9() -> Outcome {
    let s = scan_moment_lemma(Grid::Fine, 50, 11).unwrap();
    let oracle_consistent = s
        .rows
        .iter()
        .all(|r| r.brute_force >= r.exact_minimum * (1.0 - 1e-9) && r.brute_force <= r.exact_minimum * (1.0 + MOMENT_SLACK));
    let over = s.rows.iter().filter(|r| r.printed > r.brute_force * (1.0 + MOMENT_SLACK)).count();
    outcome(
        over == 0 && s.sets == 50,
        format!(
            "{over} of {} sets exceed the discretised minimum by more than 1%; worst ratio {:.3} at n={}, l={}, normalised moment {:.3}; derived-exponent variant above the exact minimum in {} sets ({} with n >= 5); discretised minimum within 1% of the closed form: {oracle_consistent}",
            s.sets, s.worst_ratio, s.worst.n, s.worst.l, s.worst.normalised_moment, s.derived_violations, s.derived_violations_n_ge_5
        ),
    )
}

fn full_suite_report() -> String {
    let cfg = SweepConfig::new(
        DomainSpec::unit_square(),
        1,
        [1, 200],
        vec![BoundId::LiYau, BoundId::Melas, BoundId::Ilyin, BoundId::JxL1, BoundId::ThmUnrestricted, BoundId::Master],
        OracleSpec::ClosedForm,
    );
    let sweep = polybound::report::run_sweep(&cfg).unwrap();
    let a = audit(&AuditConfig { grid: Grid::Fine, seed: 5, moment_sets: 50 }).unwrap();
    let mut out = to_json("compare", &sweep).unwrap();
    out += &to_csv(&sweep.rows).unwrap();
    out += &to_json("audit", &a).unwrap();
    out
}

fn criterion_10() -> Outcome {
    let first = full_suite_report();
    let second = full_suite_report();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(full_suite_report);
    outcome(
        first == second && first == single,
        format!("{} bytes; identical across runs: {}, with one thread: {}", first.len(), first == second, first == single),
    )
}

#[test]
fn acceptance_suite() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "critical-root exactness", Duration::from_secs(1), criterion_1),
        (2, "root-estimate soundness", Duration::from_secs(5), criterion_2),
        (3, "polynomial inequality brute force", Duration::from_secs(30), criterion_3),
        (4, "bound soundness on closed-form spectra", Duration::from_secs(10), criterion_4),
        (5, "clamped-plate soundness", Duration::from_secs(180), criterion_5),
        (6, "Polya on the disk", Duration::from_secs(5), criterion_6),
        (7, "coefficient-improvement arithmetic", Duration::from_secs(1), criterion_7),
        (8, "audit completeness", Duration::from_secs(60), criterion_8),
        (9, "moment lemma vs brute force", Duration::from_secs(120), criterion_9),
        (10, "determinism", Duration::from_secs(120), criterion_10),
    ];
    let mut unexpected = Vec::new();
    for (id, name, budget, run) in criteria {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let passed = o.passed && elapsed <= budget;
        let known = KNOWN_FAILURES.contains(&id);
        // straight to the stream so the lines show without --nocapture
        let line = format!(
            "{} [{id:>2}] {name} ({:.2?} of {:?}){}: {}\n",
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            budget,
            if known { " [known failure]" } else { "" },
            o.detail
        );
        std::io::stderr().write_all(line.as_bytes()).expect("stderr");
        if passed == known {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
