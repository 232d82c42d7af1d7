//! `cvqdyn`: scenario-driven front end for the continuous-variable quantum
//! dynamics library.
//!
//! Exit codes: 0 success, 1 I/O, 2 invalid configuration, 3 numerical
//! failure, 4 invariant violation (the failed check is named on stderr).

mod config;
mod output;
mod scenarios;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use config::{describe, Config, Tier, SCENARIO_KINDS};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Config(String),
    Numerical(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Config(m) | CliError::Numerical(m)
            | CliError::Invariant(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(name = "cvqdyn", version, about = "Continuous-variable bipartite quantum dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config and write CSV + manifest artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Allow slow physical-scale configs.
        #[arg(long, default_value = "fast")]
        tier: String,
        /// Worker threads for parameter sweeps (CVQDYN_THREADS as fallback).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and check a config without computing.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the parameter schema of one scenario kind.
    Describe { kind: String },
    /// List the available scenario kinds.
    ListScenarios,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ListScenarios => {
            for kind in SCENARIO_KINDS {
                println!("{kind}");
            }
            Ok(())
        }
        Command::Describe { kind } => match describe(&kind) {
            Some(text) => {
                println!("{kind}:\n{text}");
                Ok(())
            }
            None => Err(CliError::Config(format!(
                "unknown scenario kind '{kind}' (expected one of {})",
                SCENARIO_KINDS.join(", ")
            ))),
        },
        Command::Validate { config } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::Io(format!("reading {config:?}: {e}")))?;
            let cfg = Config::parse(&text)?;
            println!("ok: scenario '{}' is valid", cfg.scenario.kind);
            Ok(())
        }
        Command::Run { config, out, tier, threads } => run(config, out, &tier, threads),
    }
}

fn run(
    config_path: PathBuf,
    out_dir: PathBuf,
    tier: &str,
    threads: Option<usize>,
) -> Result<(), CliError> {
    let raw = std::fs::read(&config_path)
        .map_err(|e| CliError::Io(format!("reading {config_path:?}: {e}")))?;
    let text = String::from_utf8(raw.clone())
        .map_err(|_| CliError::Config("config is not UTF-8".into()))?;
    let cfg = Config::parse(&text)?;

    let tier_allowed = match tier {
        "fast" => Tier::Fast,
        "slow" => Tier::Slow,
        other => {
            return Err(CliError::Config(format!(
                "unknown tier '{other}' (expected fast or slow)"
            )))
        }
    };
    if cfg.scenario.tier == Tier::Slow && tier_allowed != Tier::Slow {
        return Err(CliError::Config(
            "this config is marked tier = \"slow\"; rerun with --tier slow".into(),
        ));
    }

    let n_threads = threads
        .or_else(|| {
            std::env::var("CVQDYN_THREADS").ok().and_then(|v| v.parse().ok())
        })
        .unwrap_or(1);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n_threads.max(1))
        .build_global()
        .ok(); // a second call in-process keeps the first pool

    let sha = {
        let mut h = Sha256::new();
        h.update(&raw);
        format!("{:x}", h.finalize())
    };

    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("creating {out_dir:?}: {e}")))?;

    let started = Instant::now();
    let kind = cfg.scenario.kind.clone();
    let result = match kind.as_str() {
        "evolve" => scenarios::run_evolve(&cfg),
        "box" => scenarios::run_box(&cfg),
        "rutherford" => scenarios::run_rutherford(&cfg),
        "tunneling" => scenarios::run_tunneling(&cfg),
        "entangle-gaussian" => scenarios::run_entangle_gaussian(&cfg),
        "entangle-numeric" => scenarios::run_entangle_numeric(&cfg),
        "mond-compare" => scenarios::run_mond_compare(&cfg),
        "casimir-compare" => scenarios::run_casimir_compare(&cfg),
        "convergence" => scenarios::run_convergence(&cfg),
        _ => unreachable!("validated"),
    };
    let out_data = result?;
    let wall = started.elapsed().as_secs_f64();

    let base = cfg.scenario.name.clone().unwrap_or_else(|| kind.clone());
    let csv_path = out_dir.join(format!("{base}.csv"));
    let manifest_path = out_dir.join(format!("{base}.manifest.json"));
    output::write_csv(&csv_path, &kind, VERSION, &out_data)?;
    output::write_manifest(&manifest_path, &sha, VERSION, &kind, wall, &out_data.checks)?;

    let mut failed: Vec<&str> = Vec::new();
    for c in &out_data.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        println!("check {:<40} {status}", c.name);
        if !c.pass {
            failed.push(&c.name);
        }
    }
    println!("wrote {} and {}", csv_path.display(), manifest_path.display());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "invariant checks failed: {}",
            failed.join(", ")
        )))
    }
}
