//! `grunlab`: bound tables, theorem verification, searches and sweeps.
//!
//! Exit status is 0 when every check passes, 2 when an inequality fails and
//! 1 for usage, input or validation errors.

mod output;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use grunlab_core::body::{
    normalized, revolve_roundtrip, verify_grunbaum_r, verify_makai_fradelizi, verify_minkowski_radon, ConvexBody,
    McSpec,
};
use grunlab_core::bounds::{
    classic_bounds, functional_bound, grunbaum_r_bound, jensen_bbl_bound, verify_functional, SharpBound,
};
use grunlab_core::profile::AnyProfile;
use grunlab_core::quad::QuadratureSpec;
use grunlab_core::search::{minimize_tail_ratio, sweep, SearchConfig, SweepRow, DEFAULT_GRID};

use output::{emit, Format};

#[derive(Parser, Debug)]
#[command(name = "grunlab", version, about = "Grünbaum-type halfspace bounds for concave functions and convex bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; defaults to a table on a terminal and JSON otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for Monte Carlo, search and sweep runs.
    #[arg(long, global = true, env = "GRUNLAB_SEED")]
    seed: Option<u64>,

    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate sharp constants.
    Bound(BoundArgs),
    /// Check the tail-mass bound on a concave profile.
    VerifyFn(VerifyFnArgs),
    /// Check a halfspace or section bound on a convex body.
    VerifyBody(VerifyBodyArgs),
    /// Minimize the tail ratio over concave profiles.
    Search(SearchArgs),
    /// Run the functional check on random profiles over an (alpha, beta) grid.
    Sweep(SweepArgs),
    /// Compare the functional and geometric tail masses of a body of revolution.
    RevolveRoundtrip(RoundtripArgs),
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyFnArgs {
    /// Profile JSON file.
    profile: PathBuf,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BodyTheorem {
    GrunbaumR,
    MinkowskiRadon,
    MakaiFradelizi,
}

#[derive(Args, Debug)]
struct VerifyBodyArgs {
    /// Body JSON file.
    body: PathBuf,
    #[arg(long, value_enum)]
    theorem: BodyTheorem,
    /// Direction as a comma-separated vector; normalized before use. Defaults to the first axis.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    u: Option<Vec<f64>>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Monte Carlo sample count, used only when the body has no exact section
    /// profile along `u` (polytopes in dimension 4 and up, simplex directions
    /// other than facet normals). The seed is recorded in the provenance.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 256)]
    bins: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value_t = 16)]
    breakpoints: usize,
    /// Proposals per restart.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Include accepted moves of the winning restart.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// `default` or a comma-separated list used for both alpha and beta.
    #[arg(long, default_value = "default")]
    grid: String,
    /// Alpha values, overriding the grid.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Beta values, overriding the grid.
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

#[derive(Args, Debug)]
struct RoundtripArgs {
    /// Section profile JSON file.
    profile: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
}

/// Top-level record: the command, its inputs and the result.
#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(flatten)]
    result: T,
}

#[derive(Serialize)]
struct BoundRow {
    name: &'static str,
    #[serde(flatten)]
    bound: SharpBound,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    seed.ok_or_else(|| anyhow!("{what} needs a seed: pass --seed or set GRUNLAB_SEED"))
}

fn exit_for(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn cmd_bound(cli: &Cli, args: &BoundArgs) -> Result<ExitCode> {
    let mut rows = Vec::new();
    if let Some(n) = args.n {
        let c = classic_bounds(n)?;
        rows.push(BoundRow { name: "grunbaum", bound: c.grunbaum });
        rows.push(BoundRow { name: "minkowski_radon", bound: c.minkowski_radon });
        rows.push(BoundRow { name: "makai_fradelizi", bound: c.makai_fradelizi });
    }
    match (args.alpha, args.beta) {
        (Some(a), Some(b)) => rows.push(BoundRow { name: "functional", bound: functional_bound(a, b)? }),
        (None, None) => {}
        _ => bail!("--alpha and --beta go together"),
    }
    match (args.p, args.r) {
        (Some(p), Some(r)) => {
            rows.push(BoundRow { name: "grunbaum_r", bound: grunbaum_r_bound(p, r)? });
            // the weaker constant is only defined for positive r
            if r > 0.0 {
                rows.push(BoundRow { name: "jensen_bbl", bound: jensen_bbl_bound(p, r)? });
            }
        }
        (None, None) => {}
        _ => bail!("--p and --r go together"),
    }
    if rows.is_empty() {
        bail!("nothing to evaluate: give --n, --alpha/--beta or --p/--r");
    }
    emit(Format::resolve(cli.format), &rows)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify_fn(cli: &Cli, args: &VerifyFnArgs, spec: &QuadratureSpec) -> Result<ExitCode> {
    let h = AnyProfile::from_json(&read(&args.profile)?)?;
    let report = verify_functional(&h, args.alpha, args.beta, spec)?;
    let pass = report.pass;
    let env = Envelope {
        command: "verify-fn",
        input: Some(args.profile.display().to_string()),
        seed: None,
        result: report,
    };
    emit(Format::resolve(cli.format), &[env])?;
    Ok(exit_for(pass))
}

fn cmd_verify_body(cli: &Cli, args: &VerifyBodyArgs, spec: &QuadratureSpec) -> Result<ExitCode> {
    let body = ConvexBody::from_json(&read(&args.body)?)?;
    let u = match &args.u {
        Some(u) => normalized(u)?,
        None => {
            let mut e = vec![0.0; body.dim()];
            e[0] = 1.0;
            e
        }
    };
    let mc = match args.samples {
        Some(samples) => Some(McSpec::new(samples, args.bins, require_seed(cli.seed, "Monte Carlo")?)?),
        None => None,
    };
    let report = match args.theorem {
        BodyTheorem::GrunbaumR => {
            let p = args.p.ok_or_else(|| anyhow!("grunbaum-r needs --p"))?;
            let r = args.r.ok_or_else(|| anyhow!("grunbaum-r needs --r"))?;
            verify_grunbaum_r(&body, &u, p, r, mc.as_ref(), spec)?
        }
        BodyTheorem::MinkowskiRadon => verify_minkowski_radon(&body, &u, spec)?,
        BodyTheorem::MakaiFradelizi => verify_makai_fradelizi(&body, &u, mc.as_ref(), spec)?,
    };
    let pass = report.pass;
    #[derive(Serialize)]
    struct Out {
        direction: Vec<f64>,
        #[serde(flatten)]
        report: grunlab_core::bounds::TheoremReport,
    }
    let env = Envelope {
        command: "verify-body",
        input: Some(args.body.display().to_string()),
        seed: None,
        result: Out { direction: u, report },
    };
    emit(Format::resolve(cli.format), &[env])?;
    Ok(exit_for(pass))
}

fn cmd_search(cli: &Cli, args: &SearchArgs) -> Result<ExitCode> {
    let seed = require_seed(cli.seed, "search")?;
    let mut cfg = SearchConfig::new(args.alpha, args.beta, seed);
    cfg.breakpoints = args.breakpoints;
    cfg.budget = args.budget;
    cfg.restarts = args.restarts;
    let mut res = minimize_tail_ratio(&cfg)?;
    let violation = res.violation();
    if !args.trace {
        res.trace.clear();
    }
    #[derive(Serialize)]
    struct Out {
        violation: bool,
        #[serde(flatten)]
        result: grunlab_core::search::SearchResult,
    }
    let env = Envelope {
        command: "search",
        input: None,
        seed: Some(seed),
        result: Out { violation, result: res },
    };
    emit(Format::resolve(cli.format), &[env])?;
    Ok(exit_for(!violation))
}

fn parse_grid(text: &str) -> Result<Vec<f64>> {
    if text == "default" {
        return Ok(DEFAULT_GRID.to_vec());
    }
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad grid value `{s}`")))
        .collect()
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<ExitCode> {
    let seed = require_seed(cli.seed, "sweep")?;
    let grid = parse_grid(&args.grid)?;
    let alphas = args.alpha.clone().unwrap_or_else(|| grid.clone());
    let betas = args.beta.clone().unwrap_or(grid);
    let table = sweep(&alphas, &betas, args.trials, seed)?;
    eprintln!(
        "{} cells, {} trials each, {} violations",
        table.rows.len(),
        args.trials,
        table.violations
    );
    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => table.write_csv(io::stdout().lock())?,
        other => {
            let rows: &[SweepRow] = &table.rows;
            emit(other, rows)?
        }
    }
    Ok(exit_for(table.violations == 0))
}

fn cmd_roundtrip(cli: &Cli, args: &RoundtripArgs, spec: &QuadratureSpec) -> Result<ExitCode> {
    let f = AnyProfile::from_json(&read(&args.profile)?)?;
    let rt = revolve_roundtrip(&f, args.n, args.r, spec)?;
    let env = Envelope {
        command: "revolve-roundtrip",
        input: Some(args.profile.display().to_string()),
        seed: None,
        result: rt,
    };
    emit(Format::resolve(cli.format), &[env])?;
    Ok(exit_for(rt.pass))
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let spec = QuadratureSpec::new(cli.tol, QuadratureSpec::default().max_subdivisions)?;
    match &cli.command {
        Command::Bound(a) => cmd_bound(cli, a),
        Command::VerifyFn(a) => cmd_verify_fn(cli, a, &spec),
        Command::VerifyBody(a) => cmd_verify_body(cli, a, &spec),
        Command::Search(a) => cmd_search(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::RevolveRoundtrip(a) => cmd_roundtrip(cli, a, &spec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
