//! Command-line front end for the damped-oscillator Gaussian toolkit.
//!
//! Scenarios come from a JSON config (`--config`), from flags, or both —
//! flags win. Results go to stdout or `--out` as CSV (one `#` header line,
//! 17-significant-digit floats) or JSON. Exit codes: 0 success, 2 for
//! structural configuration errors, 3 for physically inadmissible values,
//! 1 for I/O failures.

mod commands;
mod config;
mod error;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{EvalTime, OutputFormat, ScenarioConfig};
use error::CliError;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "lindblad-sieve",
    version,
    about = "Gaussian dynamics of the damped oscillator and the entropy-production sieve"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve an initial covariance and tabulate moments, area and entropy
    Evolve(RunArgs),
    /// Find the initial squeezing that minimizes long-time entropy production
    Sieve(RunArgs),
    /// Sweep parameter ranges, comparing closed-form and numeric optima
    Scan(RunArgs),
    /// Convert Lindblad-operator coefficients to friction and diffusion
    Coeffs(CoeffsArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Friction rate; overrides params.lambda
    #[arg(long, value_name = "RATE", allow_negative_numbers = true)]
    lambda: Option<f64>,

    /// Oscillator frequency; overrides constants.omega
    #[arg(long, value_name = "FREQ", allow_negative_numbers = true)]
    omega: Option<f64>,

    /// Position diffusion; overrides params.d_qq
    #[arg(long, value_name = "DIFF", allow_negative_numbers = true)]
    dqq: Option<f64>,

    /// Momentum diffusion; overrides params.d_pp
    #[arg(long, value_name = "DIFF", allow_negative_numbers = true)]
    dpp: Option<f64>,

    /// Cross diffusion; overrides params.d_pq
    #[arg(long, value_name = "DIFF", allow_negative_numbers = true)]
    dpq: Option<f64>,

    /// Final time of the uniform grid; overrides time_grid.t_max
    #[arg(long, value_name = "TIME", allow_negative_numbers = true)]
    tmax: Option<f64>,

    /// Number of grid intervals; overrides time_grid.steps
    #[arg(long, value_name = "N")]
    steps: Option<u64>,

    /// Sieve evaluation time; overrides sieve.eval_time
    #[arg(long, value_name = "TIME|auto")]
    eval_time: Option<String>,

    /// Write results here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, value_name = "FORMAT")]
    format: Option<OutputFormat>,

    /// Print the merged configuration as JSON and exit
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct CoeffsArgs {
    /// Scenario file (JSON)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Position coefficient of the first operator, "re" or "re,im"
    #[arg(long, value_name = "RE[,IM]", allow_hyphen_values = true)]
    a1: Option<String>,

    /// Position coefficient of the second operator
    #[arg(long, value_name = "RE[,IM]", allow_hyphen_values = true)]
    a2: Option<String>,

    /// Momentum coefficient of the first operator
    #[arg(long, value_name = "RE[,IM]", allow_hyphen_values = true)]
    b1: Option<String>,

    /// Momentum coefficient of the second operator
    #[arg(long, value_name = "RE[,IM]", allow_hyphen_values = true)]
    b2: Option<String>,

    /// Reduced Planck constant; overrides constants.hbar
    #[arg(long, value_name = "HBAR", allow_negative_numbers = true)]
    hbar: Option<f64>,

    /// Write results here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, value_name = "FORMAT")]
    format: Option<OutputFormat>,

    /// Print the merged configuration as JSON and exit
    #[arg(long)]
    dump_config: bool,
}

fn load_config(path: &Option<PathBuf>) -> Result<ScenarioConfig, CliError> {
    match path {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig::default()),
    }
}

fn apply_run_overrides(cfg: &mut ScenarioConfig, args: &RunArgs) -> Result<(), CliError> {
    if let Some(omega) = args.omega {
        cfg.constants.omega = omega;
    }
    if args.lambda.is_some() || args.dqq.is_some() || args.dpp.is_some() || args.dpq.is_some() {
        let params = cfg.params.get_or_insert_with(Default::default);
        if let Some(v) = args.lambda {
            params.lambda = Some(v);
        }
        if let Some(v) = args.dqq {
            params.d_qq = Some(v);
        }
        if let Some(v) = args.dpp {
            params.d_pp = Some(v);
        }
        if let Some(v) = args.dpq {
            params.d_pq = v;
        }
    }
    if args.tmax.is_some() || args.steps.is_some() {
        let grid = cfg.time_grid.get_or_insert_with(Default::default);
        if let Some(v) = args.tmax {
            grid.t_max = Some(v);
        }
        if let Some(v) = args.steps {
            grid.steps = Some(v);
        }
    }
    if let Some(raw) = &args.eval_time {
        cfg.sieve.eval_time = parse_eval_time(raw)?;
    }
    if let Some(path) = &args.out {
        cfg.output.path = Some(path.clone());
    }
    if let Some(format) = args.format {
        cfg.output.format = format;
    }
    Ok(())
}

fn apply_coeffs_overrides(cfg: &mut ScenarioConfig, args: &CoeffsArgs) -> Result<(), CliError> {
    if let Some(hbar) = args.hbar {
        cfg.constants.hbar = hbar;
    }
    let flags = [
        ("a1", &args.a1),
        ("a2", &args.a2),
        ("b1", &args.b1),
        ("b2", &args.b2),
    ];
    if flags.iter().any(|(_, v)| v.is_some()) {
        let coeffs = cfg.coefficients.get_or_insert_with(Default::default);
        for (name, raw) in flags {
            if let Some(raw) = raw {
                let value = parse_complex(name, raw)?;
                match name {
                    "a1" => coeffs.a1 = value,
                    "a2" => coeffs.a2 = value,
                    "b1" => coeffs.b1 = value,
                    _ => coeffs.b2 = value,
                }
            }
        }
    }
    if let Some(path) = &args.out {
        cfg.output.path = Some(path.clone());
    }
    if let Some(format) = args.format {
        cfg.output.format = format;
    }
    Ok(())
}

fn parse_eval_time(raw: &str) -> Result<EvalTime, CliError> {
    if raw == "auto" {
        return Ok(EvalTime::Keyword("auto".to_owned()));
    }
    raw.parse::<f64>()
        .map(EvalTime::Time)
        .map_err(|_| CliError::config(format!("--eval-time must be a number or \"auto\" (got \"{raw}\")")))
}

/// Parse "re" or "re,im" into a `[re, im]` pair.
fn parse_complex(name: &str, raw: &str) -> Result<[f64; 2], CliError> {
    let bad = || CliError::config(format!("--{name} must be \"re\" or \"re,im\" (got \"{raw}\")"));
    let mut parts = raw.splitn(2, ',');
    let re = parts
        .next()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .ok_or_else(bad)?;
    let im = match parts.next() {
        None => 0.0,
        Some(s) => s.trim().parse::<f64>().map_err(|_| bad())?,
    };
    Ok([re, im])
}

fn dump(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(cfg)
        .map_err(|e| CliError::Io(format!("serializing config: {e}")))?;
    println!("{text}");
    Ok(())
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Evolve(args) | Command::Sieve(args) | Command::Scan(args) => {
            let mut cfg = load_config(&args.config)?;
            apply_run_overrides(&mut cfg, args)?;
            cfg.validate()?;
            if args.dump_config {
                return dump(&cfg);
            }
            match &cli.command {
                Command::Evolve(_) => commands::run_evolve(&cfg),
                Command::Sieve(_) => commands::run_sieve(&cfg),
                _ => commands::run_scan(&cfg),
            }
        }
        Command::Coeffs(args) => {
            let mut cfg = load_config(&args.config)?;
            apply_coeffs_overrides(&mut cfg, args)?;
            cfg.validate()?;
            if args.dump_config {
                return dump(&cfg);
            }
            commands::run_coeffs(&cfg)
        }
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
