use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use qload_core::aqer::run_aqer_prefixes;
use qload_core::datasets::{ground_state, magnetization, SpinHamiltonianSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::emit_table;
use super::run::LoaderArgs;
use crate::manifest::ManifestBuilder;
use crate::table::{num, Table};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct PhaseArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub j: Option<f64>,
    /// Field ratios g/J.
    #[arg(long, value_delimiter = ',')]
    pub g_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<usize>>,
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

pub fn run(flags: &PhaseArgs, argv: Vec<String>) -> Result<()> {
    let a: PhaseArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let n = a.n.unwrap_or(10);
    let j = a.j.unwrap_or(1.0);
    let ratios = a.g_grid.clone().unwrap_or_else(|| vec![0.8, 0.9, 1.0, 1.1, 1.2]);
    let ts = a.t_grid.clone().unwrap_or_else(|| vec![40]);
    let seed = a.seed.unwrap_or(0);
    let out = a.out.as_deref().context("--out is required")?;
    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seed);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }

    let cfg = a.loader.aqer_config(0, None, seed);
    let blocks = ratios
        .par_iter()
        .map(|&r| -> Result<Vec<Vec<String>>> {
            let gs = ground_state(&SpinHamiltonianSpec::tfim_chain(n, j, r * j))?;
            let exact = magnetization(&gs.state)?;
            let runs = run_aqer_prefixes(&gs.state, &cfg, &ts)?;
            runs.iter()
                .map(|res| {
                    Ok(vec![
                        num(r),
                        res.config.t.to_string(),
                        num(exact),
                        num(magnetization(&res.loaded_state()?)?),
                        num(res.infidelity_final),
                    ])
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table =
        Table::new("phase", &["g_over_J", "T", "magnetization_exact", "magnetization_loaded", "infidelity"]);
    for row in blocks.into_iter().flatten() {
        table.push(row);
    }
    emit_table(&table, out, m)
}
