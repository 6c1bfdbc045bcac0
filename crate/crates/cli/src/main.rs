use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use horokit::cli::{run_with, write_outputs, ExitStatus, ExperimentConfig, RowStatus, Task};

#[derive(Parser)]
#[command(name = "horokit", version, about = "Run horosphere experiments from a JSON config")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.json (and points.csv when the
    /// experiment produces points).
    Run {
        config: PathBuf,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        verbose: bool,
    },
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("config error: {msg}");
    ExitCode::from(ExitStatus::ConfigError.code() as u8)
}

fn main() -> ExitCode {
    let Command::Run { config, out, seed, verbose } = Args::parse().command;
    if let Some(n) = std::env::var("HOROKIT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => return config_error(format!("{}: {e}", config.display())),
    };
    let mut cfg = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return config_error(e),
    };
    if let Some(s) = seed {
        cfg.metric.seed = s;
    }
    let parallel = |tasks: Vec<Task>| tasks.into_par_iter().map(|t| t()).collect();
    let run = match run_with(&cfg, parallel) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    let written = match write_outputs(&run, &cfg, &out) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("cannot write outputs: {e}");
            return ExitCode::from(ExitStatus::ConfigError.code() as u8);
        }
    };
    let r = &run.report;
    if verbose {
        for row in &r.items {
            let mark = match row.status {
                RowStatus::Pass => "pass",
                RowStatus::Inconclusive => "open",
                RowStatus::Fail => "FAIL",
            };
            eprintln!("{mark:>4}  {:<36} {}", row.key, row.detail);
        }
    }
    eprintln!(
        "{}: {} passed, {} inconclusive, {} failed",
        cfg.experiment.name(),
        r.counts.pass,
        r.counts.inconclusive,
        r.counts.fail
    );
    for p in written {
        println!("{}", p.display());
    }
    ExitCode::from(run.exit_status().code() as u8)
}
