//! `znav`: time-optimal navigation paths on a spheroid under wind.
//!
//! Exit codes: 0 success, 2 validation, 3 numeric failure, 4 IO.

mod commands;
mod config;

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use znav_core::{Error, ErrorCategory};

use crate::config::{Needs, RunArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "znav", version, about = "Time-optimal navigation paths on a spheroid under wind")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one path and summarize it
    Geodesic(RunArgs),
    /// Integrate a heading fan and classify its members
    Family(RunArgs),
    /// Integrate h-, alpha- and Randers flows from the same headings and diff them
    Compare(RunArgs),
    /// Sample the unit-time indicatrix at a point
    Indicatrix(RunArgs),
    /// Control channel, speed curve and departure angles of one path
    Report(RunArgs),
}

impl Command {
    fn parts(&self) -> (&RunArgs, Needs) {
        match self {
            Command::Geodesic(a) => (a, Needs::Single),
            Command::Family(a) => (a, Needs::Fan),
            Command::Compare(a) => (a, Needs::SingleOrFan),
            Command::Indicatrix(a) => (a, Needs::Point),
            Command::Report(a) => (a, Needs::Single),
        }
    }
}

fn category(err: &anyhow::Error) -> ErrorCategory {
    err.chain()
        .find_map(|e| e.downcast_ref::<Error>())
        .map_or(ErrorCategory::Numeric, Error::category)
}

fn exit_code(cat: ErrorCategory) -> u8 {
    match cat {
        ErrorCategory::Validation => 2,
        ErrorCategory::Numeric => 3,
        ErrorCategory::Io => 4,
    }
}

fn label(cat: ErrorCategory) -> &'static str {
    match cat {
        ErrorCategory::Validation => "validation",
        ErrorCategory::Numeric => "numeric",
        ErrorCategory::Io => "io",
    }
}

/// Applies `ZNAV_THREADS` (0 or unset: rayon's default) to the global pool.
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("ZNAV_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("ZNAV_THREADS: expected a thread count, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("ZNAV_THREADS: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: &Cli, log: &mut String) -> anyhow::Result<()> {
    configure_threads()?;
    let (args, needs) = cli.command.parts();
    let cfg = RunConfig::resolve(&args.merged()?, needs)?;
    match &cli.command {
        Command::Geodesic(_) => commands::geodesic(&cfg, log),
        Command::Family(_) => commands::family(&cfg, log),
        Command::Compare(_) => commands::compare(&cfg, log),
        Command::Indicatrix(_) => commands::indicatrix(&cfg, log),
        Command::Report(_) => commands::report(&cfg, log),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut log = String::new();
    let outcome = run(&cli, &mut log);
    // a closed pipe on stdout is not worth a panic
    let _ = std::io::stdout().lock().write_all(log.as_bytes());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let cat = category(&err);
            eprintln!("error[{}]: {err:#}", label(cat));
            ExitCode::from(exit_code(cat))
        }
    }
}
