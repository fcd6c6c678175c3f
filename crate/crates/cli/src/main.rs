//! Verification harness for truncated-Fock-space coherent operator
//! identities. Exit codes: 0 all checks pass, 1 at least one check failed,
//! 2 usage or configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fockops::Complex64;

use fockops_cli::report::{ConfigEcho, VerificationReport, SCHEMA_VERSION};
use fockops_cli::suites::{resolve_suites, run_suite, RunConfig};
use fockops_cli::tables::{matrix_table_csv, probe_series_csv, write_file, TableKind};

#[derive(Parser)]
#[command(
    name = "fockops",
    version,
    about = "Cross-verifies closed-form identities of coherent and extended coherent operators on truncated Fock spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and optionally write a JSON report
    Verify(VerifyArgs),
    /// Emit a CSV table of matrix elements, closed form vs oracle
    Table(TableArgs),
    /// Emit a CSV series of the Gaussian trace-limit probe
    Probe(ProbeArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); omit to run all suites
    #[arg(long = "suite")]
    suites: Vec<String>,

    /// Truncation dimension of the Fock space
    #[arg(long, default_value_t = 128)]
    dim: usize,

    /// Interior band on which identities are checked (at most dim/2)
    #[arg(long, default_value_t = 32)]
    band: usize,

    /// Per-check tolerance override, NAME=VALUE (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tols: Vec<String>,

    /// Seed for the (z, t) sampling
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Number of sampled (z, t) parameter points per check
    #[arg(long, default_value_t = 50)]
    samples: usize,

    /// Radius of the sampled z disk
    #[arg(long, default_value_t = 2.0)]
    z_radius: f64,

    /// Lower end of the sampled t range
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    t_min: f64,

    /// Upper end of the sampled t range
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    t_max: f64,

    /// Write the JSON report here
    #[arg(long)]
    report: Option<PathBuf>,

    /// Record wall time per check in the report (makes reports non-reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Element family to tabulate
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Largest row index n
    #[arg(long)]
    nmax: usize,

    /// Largest column index m
    #[arg(long)]
    mmax: usize,

    /// Displacement argument as RE,IM
    #[arg(long, allow_hyphen_values = true)]
    z: String,

    /// Number-phase parameter (extended kind only)
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,

    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ProbeArgs {
    /// Gaussian regulator width
    #[arg(long)]
    sigma: f64,

    /// Comma-separated t values; empty emits a header-only file
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    t: String,

    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Coherent,
    Extended,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_tol(raw: &str) -> Result<(String, f64), String> {
    let (name, value) = raw
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got '{raw}'"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("tolerance in '{raw}' is not a number"))?;
    // NaN parses as a valid f64 but must be rejected alongside negatives.
    if value.is_nan() || value < 0.0 {
        return Err(format!("tolerance in '{raw}' must be nonnegative"));
    }
    Ok((name.to_string(), value))
}

fn parse_complex(raw: &str) -> Result<Complex64, String> {
    let (re, im) = raw
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got '{raw}'"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part in '{raw}'"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part in '{raw}'"))?;
    Ok(Complex64::new(re, im))
}

fn parse_t_list(raw: &str) -> Result<Vec<f64>, String> {
    if raw.trim().is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad t value '{s}'")))
        .collect()
}

fn run_verify(args: VerifyArgs) -> ExitCode {
    let mut cfg = RunConfig {
        dim: args.dim,
        band: args.band,
        seed: args.seed,
        samples: args.samples,
        z_radius: args.z_radius,
        t_min: args.t_min,
        t_max: args.t_max,
        tol_overrides: Default::default(),
        timing: args.timing,
    };
    for raw in &args.tols {
        match parse_tol(raw) {
            Ok((name, value)) => {
                cfg.tol_overrides.insert(name, value);
            }
            Err(msg) => return usage_error(&msg),
        }
    }
    let suites = match resolve_suites(&args.suites) {
        Ok(s) => s,
        Err(msg) => return usage_error(&msg),
    };
    if let Err(msg) = cfg.validate() {
        return usage_error(&msg);
    }

    let mut checks = Vec::new();
    for suite in &suites {
        match run_suite(suite, &cfg) {
            Ok(mut results) => checks.append(&mut results),
            Err(e) => return usage_error(&format!("suite '{suite}': {e}")),
        }
    }

    for check in &checks {
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        let timing = if cfg.timing { format!("  {:.3}s", check.seconds) } else { String::new() };
        println!(
            "[{verdict}] {:<38} residual {:>12.3e}  tol {:>9.1e}{timing}",
            check.name, check.residual, check.tol
        );
    }
    let passed = checks.iter().filter(|c| c.pass).count();
    println!("verify: {passed}/{} checks passed", checks.len());

    let report = VerificationReport {
        schema_version: SCHEMA_VERSION,
        config: ConfigEcho {
            dim: cfg.dim,
            band: cfg.band,
            seed: cfg.seed,
            samples: cfg.samples,
            z_radius: cfg.z_radius,
            t_min: cfg.t_min,
            t_max: cfg.t_max,
            suites: suites.clone(),
            tol_overrides: cfg.tol_overrides.clone(),
        },
        checks,
    };
    if let Some(path) = &args.report {
        if let Err(msg) = write_file(path, &report.to_json()) {
            return usage_error(&msg);
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_table(args: TableArgs) -> ExitCode {
    let z = match parse_complex(&args.z) {
        Ok(z) => z,
        Err(msg) => return usage_error(&msg),
    };
    let kind = match args.kind {
        KindArg::Coherent => TableKind::Coherent,
        KindArg::Extended => TableKind::Extended,
    };
    match matrix_table_csv(kind, args.nmax, args.mmax, z, args.t) {
        Ok(csv) => match write_file(&args.out, &csv) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => usage_error(&msg),
        },
        Err(msg) => usage_error(&msg),
    }
}

fn run_probe(args: ProbeArgs) -> ExitCode {
    let t_list = match parse_t_list(&args.t) {
        Ok(v) => v,
        Err(msg) => return usage_error(&msg),
    };
    match probe_series_csv(args.sigma, &t_list) {
        Ok((csv, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            match write_file(&args.out, &csv) {
                Ok(()) => ExitCode::SUCCESS,
                Err(msg) => usage_error(&msg),
            }
        }
        Err(msg) => usage_error(&msg),
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Verify(args) => run_verify(args),
        Cmd::Table(args) => run_table(args),
        Cmd::Probe(args) => run_probe(args),
    }
}
