use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use qfock_cli::{execute, Command, Config};
use qfock_core::Suite;

/// Verification driver for truncated mixed q-Fock spaces.
#[derive(Parser, Debug)]
#[command(name = "qfock", version)]
struct Cli {
    /// Model configuration (`qfock/config-v1` JSON).
    #[arg(long, global = true, default_value = "configs/demo.json")]
    config: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Zero every `elapsed_ms` so reports compare byte for byte.
    #[arg(long, global = true)]
    omit_timings: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Model checks only.
    Validate,
    /// Gram matrix of one level.
    Gram {
        #[arg(long)]
        level: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
    /// Conjugate-variable series for one generator.
    Conjugate {
        #[arg(long)]
        alpha: usize,
        #[arg(long)]
        terms: usize,
    },
    /// Type label from the spectrum.
    Classify,
    /// Timings across strategies and thread counts.
    Bench {
        #[arg(long, default_value = "gram")]
        suite: String,
    },
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Gram { level } => Command::Gram { level },
            Cmd::Verify { suite } => Command::Verify { suite },
            Cmd::Conjugate { alpha, terms } => Command::Conjugate { alpha, terms },
            Cmd::Classify => Command::Classify,
            Cmd::Bench { suite } => Command::Bench { suite },
        }
    }
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QFOCK_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("QFOCK_THREADS=`{v}` is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    init_threads()?;
    let cfg = Config::load(&cli.config)?;
    let mut report = execute(&cfg, &cli.command.into())?;
    if cli.omit_timings {
        report.omit_timings();
    }
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    for c in report.checks.iter().filter(|c| c.status == qfock_core::Status::Fail) {
        eprintln!("FAIL {}: residual {} bound {}", c.name, c.residual, c.bound);
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
