//! Batch front end for the entropy-balance simulator.
//!
//! `upsilon run <config>` executes a scenario config (a TOML file, or the
//! name of a built-in recipe) and writes plot-ready CSV/JSON artifacts;
//! `upsilon validate <config>` checks a config without running it;
//! `upsilon list-recipes` prints the built-in figure recipes.
//!
//! Exit codes: 0 on success, 2 for config or environment errors
//! (including usage errors), 3 for numerical failures.

mod config;
mod recipes;
mod scenario;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// Failure modes of the front end, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("numerical failure: {0}")]
    Numerics(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numerics(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "upsilon",
    version,
    about = "Entropy balance of a driven dissipative two-level emitter"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario config and write its artifacts.
    Run {
        /// Path to a config file, or the name of a built-in recipe.
        config: String,
        /// Output directory (default: config `out_dir`, then
        /// `$UPSILON_OUT_DIR`, then `./out`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for stochastic scenarios, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for sweep and scan cells.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and validate a config without running it.
    Validate {
        /// Path to a config file, or the name of a built-in recipe.
        config: String,
    },
    /// List the built-in figure recipes.
    ListRecipes,
}

/// Reads a config from a file path, falling back to a built-in recipe of
/// that name.
fn resolve_config(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())));
    }
    if let Some(recipe) = recipes::find(arg) {
        return Ok(recipe.toml.to_string());
    }
    Err(CliError::Config(format!(
        "no config file at \"{arg}\" and no built-in recipe of that name \
         (see `upsilon list-recipes`)"
    )))
}

fn out_dir(flag: Option<PathBuf>, cfg: &config::ScenarioConfig) -> PathBuf {
    flag.or_else(|| cfg.out_dir.clone())
        .or_else(|| std::env::var_os("UPSILON_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Run {
            config,
            out,
            seed,
            threads,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            }
            let cfg = config::parse_config(&resolve_config(&config)?)?;
            let dir = out_dir(out, &cfg);
            let seed = seed.unwrap_or(cfg.seed);
            let outcome = scenario::run_scenario(&cfg, &dir, seed)?;
            println!("mode: {}", cfg.mode.as_str());
            for line in &outcome.lines {
                println!("{line}");
            }
            for path in &outcome.artifacts {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Cmd::Validate { config } => {
            let cfg = config::parse_config(&resolve_config(&config)?)?;
            println!("ok: mode={}", cfg.mode.as_str());
            Ok(())
        }
        Cmd::ListRecipes => {
            for r in recipes::ALL {
                println!("{:<22} {}", r.name, r.description);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
