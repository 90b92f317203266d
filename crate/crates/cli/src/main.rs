use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};

use qknit_cli::run::{execute, render_csv, render_json, ExperimentConfig, RunError};
use qknit_cli::{tables, verify};

/// Wire and gate cutting experiments.
#[derive(Parser)]
#[command(name = "qknit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every decomposition against its target channel.
    Verify {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Overheads for n parallel or arbitrary wire cuts, as CSV.
    Table1 {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Wire-cut versus gate-cut overheads of the two ladder circuits, as CSV.
    Table2,
    /// Effective overhead per cut wire against the number of cuts, as CSV.
    Tradeoff {
        #[arg(long)]
        n_max: f64,
        #[arg(long, default_value_t = 1.0)]
        step: f64,
    },
    /// Run the estimators described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        shots: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Emit JSON instead of CSV.
        #[arg(long)]
        json: bool,
        /// Omit the timestamp header so reruns are byte-identical.
        #[arg(long)]
        deterministic: bool,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn emit(text: &str, path: Option<&PathBuf>) -> ExitCode {
    match path {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_error(format!("cannot write {}: {e}", p.display())),
        },
        None => {
            print!("{text}");
            ExitCode::SUCCESS
        }
    }
}

fn cmd_verify(n_max: usize) -> ExitCode {
    let checks = verify::default_checks(n_max);
    print!("{}", verify::render(&checks));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        ExitCode::SUCCESS
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        ExitCode::from(EXIT_CHECK_FAILED)
    }
}

fn cmd_run(config: PathBuf, shots: Option<u64>, seed: Option<u64>, json: bool, deterministic: bool) -> ExitCode {
    let mut cfg = match ExperimentConfig::load(&config) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    if let Some(s) = shots {
        cfg.shots = s;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Err(e) = cfg.validate() {
        return usage_error(e);
    }
    let out = match execute(&cfg) {
        Ok(o) => o,
        Err(e @ RunError::Config(_)) => return usage_error(e),
        Err(e @ RunError::Estimator(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CHECK_FAILED);
        }
    };
    let timestamp = (!deterministic).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()));
    let text = if json { render_json(&out, timestamp) } else { render_csv(&out, timestamp) };
    emit(&text, cfg.output.as_ref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { n_max } => cmd_verify(n_max),
        Command::Table1 { n_max } => match tables::table1_csv(n_max) {
            Ok(s) => emit(&s, None),
            Err(e) => usage_error(e),
        },
        Command::Table2 => emit(&tables::table2_csv(), None),
        Command::Tradeoff { n_max, step } => match tables::tradeoff_csv(n_max, step) {
            Ok(s) => emit(&s, None),
            Err(e) => usage_error(e),
        },
        Command::Run {
            config,
            shots,
            seed,
            json,
            deterministic,
        } => cmd_run(config, shots, seed, json, deterministic),
    }
}
