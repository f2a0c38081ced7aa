use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use floerlab::harness::{run_demo, run_sweep, run_verify, to_csv, RunConfig, WORKERS_ENV};

#[derive(Parser)]
#[command(name = "floerlab", version, about = "Truncated Fourier checks for Floer maps and Floer functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites and write a JSON report.
    #[command(after_help = format!("Worker threads are read from {WORKERS_ENV}."))]
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the truncation sweeps and write a CSV table.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a walkthrough: `pullback` or `atlas`.
    Demo { name: String },
}

const CONFIG_ERROR: u8 = 2;

fn load(config: Option<&Path>) -> Result<RunConfig, String> {
    match config {
        Some(p) => RunConfig::from_path(p).map_err(|e| e.to_string()),
        None => Ok(RunConfig::default()),
    }
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn output_path(cli: Option<PathBuf>, cfg: &RunConfig, default: &str) -> PathBuf {
    cli.or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from(default))
}

fn verify(config: Option<PathBuf>, out: Option<PathBuf>) -> Result<u8, String> {
    let cfg = load(config.as_deref())?;
    let report = run_verify(&cfg).map_err(|e| e.to_string())?;
    let path = output_path(out, &cfg, "floerlab-report.json");
    write(&path, &report.to_json())?;
    for suite in &report.suites {
        for c in &suite.checks {
            let s = c.s.map(|s| format!(" s={s}")).unwrap_or_default();
            let status = match (c.ok, c.passed) {
                (true, true) => "pass",
                (true, false) => "expected-fail",
                (false, _) => "FAIL",
            };
            println!("{:<16} {:<40} {status}", suite.suite.name(), format!("{}{s}", c.name));
            if let Some(e) = &c.error {
                println!("{:<16}   error: {e}", "");
            }
        }
    }
    println!("report written to {}", path.display());
    Ok(report.exit_code() as u8)
}

fn sweep(config: Option<PathBuf>, out: Option<PathBuf>) -> Result<u8, String> {
    let cfg = load(config.as_deref())?;
    let rows = run_sweep(&cfg).map_err(|e| e.to_string())?;
    let path = output_path(out, &cfg, "floerlab-sweep.csv");
    write(&path, &to_csv(&rows).map_err(|e| e.to_string())?)?;
    println!("{} rows written to {}", rows.len(), path.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { config, out } => verify(config, out),
        Command::Sweep { config, out } => sweep(config, out),
        Command::Demo { name } => run_demo(&name)
            .map(|text| {
                print!("{text}");
                0
            })
            .map_err(|e| e.to_string()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("floerlab: {e}");
            ExitCode::from(CONFIG_ERROR)
        }
    }
}
