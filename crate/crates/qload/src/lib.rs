//! File formats and command-line front end for `qload-core`.
//!
//! QSV1 state files, circuit and result JSON, run manifests, CSV tables and
//! the subcommands of the `qload` binary.

pub mod circuit_json;
pub mod cmd;
pub mod config;
pub mod manifest;
pub mod qsv;
pub mod report;
pub mod table;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "qload", version, about = "Approximate quantum state loading by entanglement reduction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a target state as a QSV1 file plus a JSON manifest.
    GenDataset(cmd::gen_dataset::GenDatasetArgs),
    /// Run one loader on a target state and write its result JSON.
    Run(cmd::run::RunArgs),
    /// Run loaders over targets, sizes, shot counts and seeds into a CSV table.
    Sweep(cmd::sweep::SweepArgs),
    /// Tabulate the infidelity bounds f1 and f2 over an entropy grid.
    BoundsTable(cmd::bounds::BoundsArgs),
    /// TFIM magnetization of exact and loaded ground states over g/J.
    Phase(cmd::phase::PhaseArgs),
    /// Noisy infidelity of noiselessly trained loaders over T.
    NoiseSweep(cmd::noise::NoiseArgs),
    /// IQP loaders in exact, approx or shot mode on a random instance.
    Iqp(cmd::iqp::IqpArgs),
    /// Quick self-check of the core invariants.
    Verify(cmd::verify::VerifyArgs),
}

/// Executes a parsed command line. `argv` is recorded in the manifest.
pub fn execute(cli: &Cli, argv: Vec<String>) -> anyhow::Result<()> {
    match &cli.command {
        Command::GenDataset(a) => cmd::gen_dataset::run(a, argv),
        Command::Run(a) => cmd::run::run(a, argv),
        Command::Sweep(a) => cmd::sweep::run(a, argv),
        Command::BoundsTable(a) => cmd::bounds::run(a, argv),
        Command::Phase(a) => cmd::phase::run(a, argv),
        Command::NoiseSweep(a) => cmd::noise::run(a, argv),
        Command::Iqp(a) => cmd::iqp::run(a, argv),
        Command::Verify(a) => cmd::verify::run(a, argv),
    }
}

/// Parses `argv` (including the program name) and executes it.
pub fn main_with_args(argv: Vec<String>) -> anyhow::Result<()> {
    let cli = Cli::try_parse_from(&argv)?;
    execute(&cli, argv)
}
