use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use qload_core::noisy::{noise_sweep, NoisePlacement};
use serde::{Deserialize, Serialize};

use super::run::LoaderArgs;
use super::{emit_table, load_target};
use crate::manifest::ManifestBuilder;
use crate::table::{num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// After every gate, on its support.
    PerGate,
    /// After every circuit layer, on all qubits.
    PerLayer,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long)]
    pub target: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<usize>>,
    /// Single-qubit depolarizing probability.
    #[arg(long)]
    pub p1: Option<f64>,
    /// Two-qubit depolarizing probability.
    #[arg(long)]
    pub p2: Option<f64>,
    #[arg(long, value_enum)]
    pub noise_placement: Option<Placement>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub loader: LoaderArgs,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub fn run(flags: &NoiseArgs, argv: Vec<String>) -> Result<()> {
    let a: NoiseArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let target_path = a.target.as_deref().context("--target is required")?;
    let ts = a.t_grid.clone().unwrap_or_else(|| vec![5, 10, 20, 40, 60, 100]);
    let (p1, p2) = (a.p1.unwrap_or(1e-3), a.p2.unwrap_or(1e-2));
    let placement = match a.noise_placement.unwrap_or(Placement::PerGate) {
        Placement::PerGate => NoisePlacement::PerGate,
        Placement::PerLayer => NoisePlacement::PerLayer,
    };
    let seed = a.seed.unwrap_or(0);
    let out = a.out.as_deref().context("--out is required")?;
    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seed);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    let target = load_target(target_path, &mut m)?;
    let rows = noise_sweep(&target, &a.loader.aqer_config(0, None, seed), &ts, p1, p2, placement)?;
    let mut table = Table::new("noise-sweep", &["T", "p1", "p2", "infidelity"]);
    for r in rows {
        table.push(vec![r.t.to_string(), num(p1), num(p2), num(r.noisy)]);
    }
    emit_table(&table, out, m)
}
