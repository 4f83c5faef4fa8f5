//! `chill-lab`: experiments on multi-interface Cahn–Hilliard dynamics.

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use chill_core::par::Exec;
use config::RunConfig;
use error::CliError;
use io::{Manifest, Staging};

#[derive(Debug, Parser)]
#[command(name = "chill-lab", version, about = "Interface dynamics laboratory for the 1D parabolic Cahn–Hilliard equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file of `key = value` lines.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Number of interfaces.
    #[arg(long, global = true)]
    k: Option<String>,
    /// Initial time.
    #[arg(long = "t0", global = true, value_name = "T")]
    t0: Option<String>,
    #[arg(long, global = true, value_name = "X")]
    t_end: Option<String>,
    /// Domain half-width.
    #[arg(long = "grid-l", global = true)]
    grid_l: Option<String>,
    /// Grid points.
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<String>,
    #[arg(long, global = true)]
    sigma: Option<String>,
    #[arg(long, global = true)]
    alpha: Option<String>,
    /// Worker threads (0 = all cores, 1 = sequential).
    #[arg(long, global = true)]
    jobs: Option<String>,
    /// Output directory [default: $CHILL_LAB_OUT, else ./chill-lab-out].
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Divide every verify tolerance by this factor.
    #[arg(long, global = true, value_name = "FACTOR")]
    tighten: Option<String>,
    /// Any configuration key, e.g. `--set solver.dt_max=0.02`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Replaces the Toda interaction coefficient (mutation testing).
    #[arg(long, global = true, hide = true)]
    mutate_ch_coefficient: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Integrate the PDE from ansatz data and fit the interface law.
    Simulate,
    /// Integrate an interface ODE system.
    Toda,
    /// Tabulate the weighted error of the ansatz.
    AnsatzError,
    /// Run the identity suite.
    Verify,
    /// Kernel-lemma and heat-kernel tables.
    Kernel,
    /// Refit `track.csv` in an existing output directory.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Toda => "toda",
            Command::AnsatzError => "ansatz-error",
            Command::Verify => "verify",
            Command::Kernel => "kernel",
            Command::Report => "report",
        }
    }
}

/// Defaults, then `CHILL_LAB_OUT`, then the file, then flags.
fn resolve(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig { subcommand: cli.command.name().into(), ..RunConfig::default() };
    if let Some(dir) = std::env::var_os("CHILL_LAB_OUT").filter(|d| !d.is_empty()) {
        cfg.out = PathBuf::from(dir);
    }
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        cfg.apply_text(&text)?;
    }
    let flags = [
        ("k", &cli.k),
        ("T", &cli.t0),
        ("t_end", &cli.t_end),
        ("grid.L", &cli.grid_l),
        ("grid.N", &cli.grid_n),
        ("ansatz.sigma", &cli.sigma),
        ("ansatz.alpha", &cli.alpha),
        ("jobs", &cli.jobs),
        ("seed", &cli.seed),
        ("verify.tighten", &cli.tighten),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| config::ConfigError::Syntax { line: 0, text: format!("--set {kv}") })?;
        cfg.set(k, v)?;
    }
    if let Some(c) = cli.mutate_ch_coefficient {
        cfg.ch_coefficient = c;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let cfg = resolve(cli)?;
    let exec = match cfg.jobs {
        1 => Exec::Sequential,
        _ => Exec::Parallel,
    };
    if cfg.jobs > 1 {
        // only fails if a pool already exists, in which case that pool is used
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global();
    }
    let start = Instant::now();
    let mut stage = Staging::new(&cfg.out)?;
    let checks = match cli.command {
        Command::Simulate => commands::run_simulate(&cfg, exec, &mut stage),
        Command::Toda => commands::run_toda(&cfg, &mut stage),
        Command::AnsatzError => commands::run_ansatz_error(&cfg, exec, &mut stage),
        Command::Verify => commands::run_verify(&cfg, exec, &mut stage),
        Command::Kernel => commands::run_kernel(exec, &mut stage),
        Command::Report => commands::run_report(&cfg, &mut stage),
    }?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    for c in &checks {
        println!("{} {:<28} {:>12.4e} <= {:.3e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.tolerance);
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cfg.subcommand.clone(),
        status: if failed.is_empty() { "pass" } else { "fail" },
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        config: cfg.echo(),
        checks,
        failed_checks: failed.clone(),
        files: stage.files().to_vec(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    json.push('\n');
    let name = if cli.command == Command::Report { "manifest_report.json" } else { "manifest.json" };
    let count = stage.files().len();
    stage.commit(name, json.as_bytes())?;
    println!("wrote {} files and {name} to {}", count, cfg.out.display());
    if !failed.is_empty() {
        eprintln!("failed checks: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Config(config::ConfigError::UnknownKey(_)) = e {
                let names: Vec<&str> = config::KEYS.iter().map(|k| k.0).collect();
                eprintln!("known keys: {}, tolerance.<check>", names.join(", "));
            }
            ExitCode::from(e.exit_code())
        }
    }
}
