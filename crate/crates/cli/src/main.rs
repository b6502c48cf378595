//! `fblsec`: evaluate, sweep and optimize secrecy throughput from TOML scenarios.
//!
//! Exit codes: 0 on success (including infeasible optimizations), 1 on
//! I/O or numerical failure, 2 on usage errors, 3 on invalid scenarios.

mod commands;
mod error;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::scenario::{parse_methods, Scenario};

#[derive(Debug, Parser)]
#[command(name = "fblsec", version, about = "Finite-blocklength secrecy throughput")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the throughput of one scenario.
    Eval(Options),
    /// Write a CSV curve over the scenario's sweep variable.
    Sweep(Options),
    /// Optimize blocklength, packet size or power split.
    Optimize(Options),
}

#[derive(Debug, Args)]
struct Options {
    /// Scenario file (flat TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Comma-separated methods: theorem1, prop1, prop2, high_snr, theorem3, infinite_N, monte_carlo.
    #[arg(long, value_delimiter = ',')]
    method: Vec<String>,
    /// Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo trials.
    #[arg(long)]
    trials: Option<u64>,
    /// Monte Carlo worker threads; 0 uses all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Options {
    fn scenario(&self) -> Result<Scenario, CliError> {
        let mut scn = Scenario::load(&self.scenario)?;
        if !self.method.is_empty() {
            scn.methods = Some(parse_methods(&self.method)?);
        }
        if let Some(seed) = self.seed {
            scn.mc.seed = seed;
        }
        if let Some(trials) = self.trials {
            scn.mc.trials = trials;
        }
        if let Some(workers) = self.workers {
            scn.mc.workers = workers;
        }
        Ok(scn)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

type Handler = fn(&Scenario) -> Result<String, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (opts, command): (&Options, Handler) = match &cli.command {
        Command::Eval(o) => (o, commands::eval),
        Command::Sweep(o) => (o, commands::sweep),
        Command::Optimize(o) => (o, commands::optimize),
    };
    let scn = opts.scenario()?;
    let text = command(&scn)?;
    opts.emit(&text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fblsec: {e}");
            e.exit_code()
        }
    }
}
