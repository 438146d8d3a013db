use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use qload_core::{bound_f1, bound_f2};
use serde::{Deserialize, Serialize};

use super::emit_table;
use crate::manifest::ManifestBuilder;
use crate::table::{num, Table};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    /// Qubit count entering f1.
    #[arg(long)]
    pub n: Option<usize>,
    /// Explicit entropy values; otherwise an even grid over [0, N].
    #[arg(long, value_delimiter = ',')]
    pub s_grid: Option<Vec<f64>>,
    /// Intervals of the even grid.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub fn table(n: usize, grid: &[f64]) -> Result<Table> {
    let mut t = Table::new("bounds", &["S", "f1", "f2"]);
    for &s in grid {
        t.push(vec![num(s), num(bound_f1(s, n)?), num(bound_f2(s)?)]);
    }
    Ok(t)
}

pub fn run(flags: &BoundsArgs, argv: Vec<String>) -> Result<()> {
    let a: BoundsArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let n = a.n.context("--n is required")?;
    let grid = match &a.s_grid {
        Some(g) => g.clone(),
        None => {
            let steps = a.steps.unwrap_or(100);
            if steps == 0 {
                bail!("--steps must be positive");
            }
            (0..=steps).map(|i| n as f64 * i as f64 / steps as f64).collect()
        }
    };
    let out = a.out.as_deref().context("--out is required")?;
    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, 0);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    emit_table(&table(n, &grid)?, out, m)
}
