//! `psoct`: forward simulation, extraction, inversion and self-tests.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure.

mod commands;
mod config;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use log::error;

use commands::Ctx;
use config::Loaded;

#[derive(Parser)]
#[command(name = "psoct", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Noise seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; overrides the config.
    #[arg(long)]
    threads: Option<usize>,
    /// Fixed Tikhonov parameter for the ψ̃₃₃ solve.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate interferograms for the configured phantom.
    Forward(Common),
    /// Extract reciprocal-space samples from stored interferograms.
    Extract(Common),
    /// Reconstruct ψ̃ from stored samples or interferograms.
    Invert(Common),
    /// Forward, extract and invert in one go, with errors against the phantom.
    Roundtrip(Common),
    /// Run the identity checks and print a table.
    Selftest {
        #[arg(long)]
        threads: Option<usize>,
        /// Offset added to the determinant constant; any non-zero value must fail.
        #[arg(long, hide = true, default_value_t = 0.0)]
        mutate_determinant: f64,
    },
}

enum Failure {
    Validation,
    Numerical,
}

fn classify(e: &anyhow::Error) -> Failure {
    for cause in e.chain() {
        if let Some(p) = cause.downcast_ref::<psoct::Error>() {
            return if p.is_numerical() {
                Failure::Numerical
            } else {
                Failure::Validation
            };
        }
    }
    Failure::Validation
}

fn set_threads(n: Option<usize>) -> Result<()> {
    if let Some(n) = n {
        if n == 0 {
            anyhow::bail!(psoct::Error::InvalidArgument("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn context(c: &Common) -> Result<Ctx> {
    let loaded = Loaded::from_path(&c.config)?;
    if let Some(l) = c.lambda {
        if !(l > 0.0) {
            anyhow::bail!(psoct::Error::Regularization(l));
        }
    }
    set_threads(c.threads.or(loaded.cfg.threads))?;
    let out = loaded.out_dir(c.out.as_deref());
    std::fs::create_dir_all(&out)?;
    Ok(Ctx {
        out,
        seed: c.seed.unwrap_or(loaded.cfg.seed),
        lambda: c.lambda,
        loaded,
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Forward(c) => commands::forward(&context(&c)?)?,
        Command::Extract(c) => commands::extract(&context(&c)?)?,
        Command::Invert(c) => commands::invert(&context(&c)?)?,
        Command::Roundtrip(c) => commands::roundtrip(&context(&c)?)?,
        Command::Selftest {
            threads,
            mutate_determinant,
        } => {
            set_threads(threads)?;
            let checks = selftest::run(&selftest::Mutation {
                determinant: mutate_determinant,
            });
            selftest::print_table(&checks);
            if !checks.iter().all(selftest::Check::passed) {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            error!("{e:#}");
            eprintln!("error: {e:#}");
            ExitCode::from(match classify(&e) {
                Failure::Validation => 1,
                Failure::Numerical => 2,
            })
        }
    }
}
