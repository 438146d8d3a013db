use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use qload_core::aqer::run_aqer_prefixes;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{run_loader, LoaderArgs, LoaderMethod};
use super::{dataset_name, emit_table, load_target};
use crate::manifest::ManifestBuilder;
use crate::report::LoaderReport;
use crate::table::{num, opt_num, Table};

pub const COLUMNS: [&str; 10] =
    ["dataset", "method", "T", "G", "shots", "seed", "S_final", "infidelity_initial", "infidelity_final", "wall_ms"];

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long, value_enum, value_delimiter = ',')]
    pub methods: Option<Vec<LoaderMethod>>,
    /// QSV1 targets; the file stem labels the dataset.
    #[arg(long, value_delimiter = ',')]
    pub targets: Option<Vec<PathBuf>>,
    /// AQER iterations `T`, or the unit/layer count for baselines.
    #[arg(long, value_delimiter = ',')]
    pub t_grid: Option<Vec<usize>>,
    /// Shot counts for AQER; exact mode when omitted.
    #[arg(long, value_delimiter = ',')]
    pub shots_grid: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fill the wall_ms column. Timed cells run standalone and the table is
    /// no longer reproducible byte for byte.
    #[arg(long)]
    #[serde(default)]
    pub timing: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub loader: LoaderArgs,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone)]
struct Row {
    dataset: String,
    method: LoaderMethod,
    t: usize,
    shots: Option<u64>,
    seed: u64,
    report: LoaderReport,
    wall_ms: Option<u128>,
}

impl Row {
    fn cells(&self) -> Vec<String> {
        vec![
            self.dataset.clone(),
            self.method.name().to_string(),
            self.t.to_string(),
            self.report.g.to_string(),
            self.shots.map(|s| s.to_string()).unwrap_or_default(),
            self.seed.to_string(),
            opt_num(self.report.s_final),
            opt_num(self.report.infidelity_initial),
            num(self.report.infidelity_final),
            self.wall_ms.map(|w| w.to_string()).unwrap_or_default(),
        ]
    }
}

/// One unit of parallel work: every `T` of one (dataset, method, shots, seed).
struct Cell<'a> {
    dataset: &'a str,
    target: &'a qload_core::StateVector,
    method: LoaderMethod,
    shots: Option<u64>,
    seed: u64,
}

fn run_cell(c: &Cell, ts: &[usize], l: &LoaderArgs, timing: bool) -> Result<Vec<Row>> {
    let row = |t, report, wall_ms| Row {
        dataset: c.dataset.to_string(),
        method: c.method,
        t,
        shots: c.shots,
        seed: c.seed,
        report,
        wall_ms,
    };
    if c.method == LoaderMethod::Aqer && !timing {
        // Step I is shared by all prefixes; each result equals a standalone run.
        let runs = run_aqer_prefixes(c.target, &l.aqer_config(0, c.shots, c.seed), ts)?;
        return Ok(runs.iter().zip(ts).map(|(r, &t)| row(t, LoaderReport::from_aqer(r), None)).collect());
    }
    ts.iter()
        .map(|&t| {
            let start = Instant::now();
            let report = run_loader(c.method, c.target, t, c.shots, c.seed, l)?;
            Ok(row(t, report, timing.then(|| start.elapsed().as_millis())))
        })
        .collect()
}

pub fn run(flags: &SweepArgs, argv: Vec<String>) -> Result<()> {
    let a: SweepArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let methods = a.methods.clone().unwrap_or_else(|| vec![LoaderMethod::Aqer]);
    let targets = a.targets.clone().filter(|t| !t.is_empty()).context("--targets is required")?;
    let ts = a.t_grid.clone().filter(|t| !t.is_empty()).context("--t-grid is required")?;
    let seeds = a.seeds.clone().unwrap_or_else(|| vec![0]);
    let shots: Vec<Option<u64>> = match &a.shots_grid {
        Some(g) if !g.is_empty() => g.iter().map(|&s| Some(s)).collect(),
        _ => vec![None],
    };
    if shots.iter().any(Option::is_some) && methods.iter().any(|&m| m != LoaderMethod::Aqer) {
        bail!("--shots-grid applies to aqer only");
    }
    let out = a.out.as_deref().context("--out is required")?;

    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seeds[0]);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    let loaded = targets
        .iter()
        .map(|p| Ok((dataset_name(p), load_target(p, &mut m)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    for (name, target) in &loaded {
        for &method in &methods {
            for &s in &shots {
                for &seed in &seeds {
                    cells.push(Cell { dataset: name, target, method, shots: s, seed });
                }
            }
        }
    }
    let mut rows: Vec<Row> = cells
        .par_iter()
        .map(|c| run_cell(c, &ts, &a.loader, a.timing))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(|x, y| {
        (&x.dataset, x.method.name(), x.t, x.shots, x.seed).cmp(&(&y.dataset, y.method.name(), y.t, y.shots, y.seed))
    });

    let mut table = Table::new("sweep", &COLUMNS);
    for r in &rows {
        table.push(r.cells());
    }
    eprintln!("{} rows", table.len());
    emit_table(&table, out, m)
}
