use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polybound::critical::{q_of_k, root_lower_estimate};
use polybound::deep::{audit_coefficients, thresholds, ThresholdSet};
use polybound::error::BoundError;
use polybound::lemmas::{scan_g_convexity, scan_polynomial, scan_moment_lemma, Grid};
use polybound::report::{
    audit, key_value_csv, oracle_spectrum, run_sweep, to_csv, to_json, AuditConfig, BoundId, DomainSpec, Format,
    OracleSpec, Refinement, SweepConfig, SweepRow,
};

#[derive(Parser)]
#[command(name = "polybound", version, about = "Lower bounds for Dirichlet poly-Laplacian eigenvalue sums")]
struct Cli {
    /// TOML config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Earlier bounds (Li–Yau, Melas, …) over a k range
    Bounds(SweepArgs),
    /// The new theorems, the unrestricted bound and the master bound
    DeepBounds {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Re-derive every displayed constant instead of evaluating bounds
        #[arg(long)]
        audit_coefficients: bool,
    },
    /// Reference eigenvalues of a domain
    Spectrum(SweepArgs),
    /// Root of (t+1)^{n+1} − t^{n+1} = Q and its lower estimates
    CriticalRoot {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, alias = "Q", conflicts_with = "k")]
        q: Option<f64>,
        /// Use Q(k) of the configured domain
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        domain: Option<DomainSpec>,
    },
    /// Brute-force scan of one lemma; exits 2 if it is violated
    VerifyLemma {
        #[arg(long, value_parser = ["polynomial", "moment", "g-convexity"])]
        lemma: String,
        #[arg(long, default_value = "fine")]
        grid: Grid,
        /// Random constraint sets for the moment lemma
        #[arg(long, default_value_t = 50)]
        sets: usize,
    },
    /// Bounds against an oracle spectrum; exits 2 on a soundness violation
    Compare(SweepArgs),
    /// Coefficient verdicts and lemma scans in one document
    Audit {
        #[arg(long)]
        grid: Option<Grid>,
        #[arg(long)]
        sets: Option<usize>,
    },
}

#[derive(Args, Clone, Default)]
struct SweepArgs {
    /// square, disk, rectangle:a,b[,c], ball:n:r or explicit:n:V:I
    #[arg(long)]
    domain: Option<DomainSpec>,
    #[arg(long)]
    l: Option<u32>,
    #[arg(long)]
    k_min: Option<u64>,
    #[arg(long)]
    k_max: Option<u64>,
    /// A single k or a range a..b (sets both ends)
    #[arg(long, value_parser = parse_k, conflicts_with_all = ["k_min", "k_max"])]
    k: Option<[u64; 2]>,
    /// Bound id; repeat or comma-separate for several
    #[arg(long = "bound", alias = "bounds", value_delimiter = ',')]
    bounds: Vec<BoundId>,
    /// closed_form, none, fd:<h> or fd:<h>:none (no Richardson step)
    #[arg(long)]
    oracle: Option<String>,
    /// Shorthand for --oracle fd:<h>
    #[arg(long, conflicts_with = "oracle")]
    h: Option<f64>,
    /// Relative tolerance for bound <= oracle
    #[arg(long)]
    tolerance: Option<f64>,
}

const CLASSICAL: [BoundId; 9] = [
    BoundId::LiYau,
    BoundId::Melas,
    BoundId::Ilyin,
    BoundId::Yy,
    BoundId::JxL1,
    BoundId::LevineProtter,
    BoundId::Cswz,
    BoundId::JxL2,
    BoundId::Cqw,
];
const DEEP: [BoundId; 6] =
    [BoundId::Thm, BoundId::ThmUnrestricted, BoundId::Master, BoundId::Recomputed, BoundId::Stokes, BoundId::RemarkF];
const COMPARE_DEFAULT: [BoundId; 6] =
    [BoundId::LiYau, BoundId::Melas, BoundId::Ilyin, BoundId::JxL1, BoundId::ThmUnrestricted, BoundId::Master];

fn parse_k(s: &str) -> Result<[u64; 2], String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad k '{s}' (an integer or a..b)"));
    match s.split_once("..") {
        Some((a, b)) => Ok([num(a)?, num(b)?]),
        None => num(s).map(|k| [k, k]),
    }
}

fn parse_oracle(s: &str) -> Result<OracleSpec, BoundError> {
    let bad = || BoundError::Config(format!("cannot parse oracle '{s}'"));
    match s.split(':').collect::<Vec<_>>().as_slice() {
        ["closed_form"] => Ok(OracleSpec::ClosedForm),
        ["none"] => Ok(OracleSpec::None),
        ["fd", h] => Ok(OracleSpec::Fd { h: h.parse().map_err(|_| bad())?, refinement: Refinement::Richardson }),
        ["fd", h, "none"] => Ok(OracleSpec::Fd { h: h.parse().map_err(|_| bad())?, refinement: Refinement::None }),
        _ => Err(bad()),
    }
}

struct Ctx {
    config_text: Option<String>,
    format: Option<Format>,
    seed: Option<u64>,
}

impl Ctx {
    /// Config file (or the given default) with command-line overrides applied.
    fn sweep(&self, args: &SweepArgs, default_bounds: &[BoundId], default_oracle: OracleSpec) -> Result<SweepConfig> {
        let mut cfg = match &self.config_text {
            Some(t) => SweepConfig::from_toml(t)?,
            None => SweepConfig::new(DomainSpec::unit_square(), 1, [1, 100], vec![], default_oracle),
        };
        if let Some(d) = &args.domain {
            cfg.domain = d.clone();
        }
        if let Some(l) = args.l {
            cfg.l = l;
        }
        if let Some(k) = args.k_min {
            cfg.k_range[0] = k;
        }
        if let Some(k) = args.k_max {
            cfg.k_range[1] = k;
        }
        if let Some(k) = args.k {
            cfg.k_range = k;
        }
        if !args.bounds.is_empty() {
            cfg.bounds = args.bounds.clone();
        } else if self.config_text.is_none() {
            cfg.bounds = default_bounds.iter().copied().filter(|b| b.fixed_order().map_or(true, |o| o == cfg.l)).collect();
        }
        if let Some(o) = &args.oracle {
            cfg.oracle = parse_oracle(o)?;
        }
        if let Some(h) = args.h {
            cfg.oracle = OracleSpec::Fd { h, refinement: Refinement::Richardson };
        }
        if let Some(t) = args.tolerance {
            cfg.tolerance = Some(t);
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(f) = self.format {
            cfg.output = f;
        }
        Ok(cfg)
    }

    fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

/// Rendered report and whether every check in it passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn render<T: Serialize>(format: Format, command: &str, body: &T) -> Result<String> {
    Ok(match format {
        Format::Json => to_json(command, body)?,
        Format::Csv => key_value_csv(body)?,
    })
}

#[derive(Serialize)]
struct BoundsReport<'a> {
    domain: &'a DomainSpec,
    l: u32,
    k_range: [u64; 2],
    thresholds: Option<ThresholdSet>,
    rows: &'a [SweepRow],
}

fn bounds_command(ctx: &Ctx, args: &SweepArgs, defaults: &[BoundId], command: &str) -> Result<Outcome> {
    let mut cfg = ctx.sweep(args, defaults, OracleSpec::None)?;
    if args.oracle.is_none() && ctx.config_text.is_none() {
        cfg.oracle = OracleSpec::None;
    }
    let report = run_sweep(&cfg)?;
    let text = match cfg.output {
        Format::Csv => to_csv(&report.rows)?,
        Format::Json => {
            let th = (command == "deep-bounds").then(|| thresholds(report.n, report.l)).transpose()?;
            to_json(
                command,
                &BoundsReport { domain: &report.domain, l: report.l, k_range: report.k_range, thresholds: th, rows: &report.rows },
            )?
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct SpectrumRow {
    index: u64,
    eigenvalue: f64,
    error_estimate: Option<f64>,
    method: &'static str,
    partial_sum: f64,
}

fn spectrum_command(ctx: &Ctx, args: &SweepArgs) -> Result<Outcome> {
    let l = args.l.unwrap_or(1);
    let default_oracle = if l == 1 { OracleSpec::ClosedForm } else { OracleSpec::Fd { h: 1.0 / 40.0, refinement: Refinement::Richardson } };
    let mut cfg = ctx.sweep(args, &[BoundId::Cqw], default_oracle)?;
    if cfg.oracle == OracleSpec::None {
        return Err(BoundError::Config("spectrum needs an oracle".into()).into());
    }
    if args.k_min.is_none() && args.k.is_none() && ctx.config_text.is_none() {
        cfg.k_range[0] = 1;
    }
    cfg.validate()?;
    let s = oracle_spectrum(&cfg.domain, cfg.oracle, cfg.l, cfg.k_range[1] as usize)?.expect("oracle configured");
    let rows: Vec<SpectrumRow> = s
        .eigenvalues
        .iter()
        .zip(s.partial_sums())
        .zip(&s.error_estimate)
        .enumerate()
        .map(|(i, ((&eigenvalue, partial_sum), &e))| SpectrumRow {
            index: i as u64 + 1,
            eigenvalue,
            error_estimate: e.is_finite().then_some(e),
            method: s.method.as_str(),
            partial_sum,
        })
        .filter(|r| r.index >= cfg.k_range[0])
        .collect();
    let text = match cfg.output {
        Format::Csv => to_csv(&rows)?,
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                domain: &'a DomainSpec,
                l: u32,
                method: polybound::oracles::Method,
                rows: &'a [SpectrumRow],
            }
            to_json("spectrum", &Body { domain: &cfg.domain, l: cfg.l, method: s.method, rows: &rows })?
        }
    };
    Ok(Outcome::ok(text))
}

fn critical_root_command(ctx: &Ctx, n: Option<usize>, q: Option<f64>, k: Option<u64>, domain: Option<DomainSpec>) -> Result<Outcome> {
    let (n, q) = match (q, k) {
        (Some(q), _) => (n.unwrap_or(2), q),
        (None, Some(k)) => {
            let spec = match (domain, &ctx.config_text) {
                (Some(d), _) => d,
                (None, Some(t)) => SweepConfig::from_toml(t)?.domain,
                (None, None) => DomainSpec::unit_square(),
            };
            let d = spec.build()?.derived();
            (d.n, q_of_k(&d, k as f64))
        }
        (None, None) => return Err(BoundError::Config("critical-root needs --q or --k".into()).into()),
    };
    let est = root_lower_estimate(n, q)?;
    Ok(Outcome::ok(render(ctx.format(), "critical-root", &est)?))
}

fn verify_lemma_command(ctx: &Ctx, lemma: &str, grid: Grid, sets: usize) -> Result<Outcome> {
    let seed = ctx.seed.unwrap_or(0);
    let format = ctx.format();
    Ok(match lemma {
        "polynomial" => {
            let s = scan_polynomial(grid, seed);
            Outcome { text: render(format, "verify-lemma", &s)?, passed: s.passed }
        }
        "g-convexity" => {
            let s = scan_g_convexity(grid);
            Outcome { text: render(format, "verify-lemma", &s)?, passed: s.passed }
        }
        _ => {
            let s = scan_moment_lemma(grid, sets, seed)?;
            let text = match format {
                Format::Csv => to_csv(&s.rows)?,
                Format::Json => to_json("verify-lemma", &s)?,
            };
            Outcome { text, passed: s.passed }
        }
    })
}

fn audit_command(ctx: &Ctx, grid: Option<Grid>, sets: Option<usize>) -> Result<Outcome> {
    let mut cfg = match &ctx.config_text {
        Some(t) => AuditConfig::from_toml(t)?,
        None => AuditConfig::default(),
    };
    if let Some(g) = grid {
        cfg.grid = g;
    }
    if let Some(s) = sets {
        cfg.moment_sets = s;
    }
    if let Some(s) = ctx.seed {
        cfg.seed = s;
    }
    let r = audit(&cfg)?;
    let text = match ctx.format() {
        Format::Csv => to_csv(&r.entries().collect::<Vec<_>>())?,
        Format::Json => to_json("audit", &r)?,
    };
    Ok(Outcome::ok(text))
}

fn run(cli: &Cli) -> Result<Outcome> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().context("thread pool")?;
    }
    let config_text = match &cli.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|e| BoundError::Config(format!("{}: {e}", p.display())))?),
        None => None,
    };
    let ctx = Ctx { config_text, format: cli.format, seed: cli.seed };
    match &cli.command {
        Command::Bounds(a) => bounds_command(&ctx, a, &CLASSICAL, "bounds"),
        Command::DeepBounds { audit_coefficients: true, .. } => {
            let a = audit_coefficients()?;
            Ok(Outcome::ok(match ctx.format() {
                Format::Csv => to_csv(&a.entries)?,
                Format::Json => to_json("deep-bounds", &a)?,
            }))
        }
        Command::DeepBounds { sweep, .. } => bounds_command(&ctx, sweep, &DEEP, "deep-bounds"),
        Command::Spectrum(a) => spectrum_command(&ctx, a),
        Command::CriticalRoot { n, q, k, domain } => critical_root_command(&ctx, *n, *q, *k, domain.clone()),
        Command::VerifyLemma { lemma, grid, sets } => verify_lemma_command(&ctx, lemma, *grid, *sets),
        Command::Compare(a) => {
            let cfg = ctx.sweep(a, &COMPARE_DEFAULT, OracleSpec::ClosedForm)?;
            let r = run_sweep(&cfg)?;
            let text = match cfg.output {
                Format::Csv => to_csv(&r.rows)?,
                Format::Json => to_json("compare", &r)?,
            };
            Ok(Outcome { text, passed: r.passed })
        }
        Command::Audit { grid, sets } => audit_command(&ctx, *grid, *sets),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| BoundError::Config(format!("{}: {e}", p.display())).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|o| write_out(cli.out.as_deref(), &o.text).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("polybound: check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("polybound: {e:#}");
            let code = e.downcast_ref::<BoundError>().map_or(3, BoundError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
