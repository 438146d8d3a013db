use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use qload_core::datasets::iqp_state;
use qload_core::iqp::{
    approx_grid_size, cosine_floor, iqp_approx_load, iqp_exact_load, iqp_shot_recover, pi8_spec, random_continuous_spec,
    random_graph, random_grid_spec, ShotRecoveryOptions, EXACT_TOL, SHOT_CONSTANT,
};
use qload_core::random::{substream, Stream};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::emit_json;
use crate::manifest::ManifestBuilder;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IqpMode {
    /// Grid angles, classical access.
    Exact,
    /// Uniform angles, ε-approximate grid search.
    Approx,
    /// Fixed π/8 instance recovered from shot estimates.
    Shot,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct IqpArgs {
    #[arg(long, value_enum)]
    pub mode: Option<IqpMode>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge count of the random graph.
    #[arg(long)]
    pub edges: Option<usize>,
    /// Angle grid size (exact mode).
    #[arg(long)]
    pub k: Option<usize>,
    /// Target entropy (approx mode).
    #[arg(long)]
    pub eps: Option<f64>,
    /// Degree cap of the graph (approx and shot modes).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Target failure probability (shot mode).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Shot-budget constant (shot mode).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqpReport {
    pub mode: IqpMode,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E_true")]
    pub e_true: Vec<(usize, usize)>,
    #[serde(rename = "E_recovered")]
    pub e_recovered: Vec<(usize, usize)>,
    pub iterations: usize,
    pub shots_used: u64,
    #[serde(rename = "S_final")]
    pub s_final: f64,
    pub infidelity: f64,
    /// Exact modes: loader certified; approx mode: `S_final ≤ ε`.
    pub recovered: bool,
}

pub fn run(flags: &IqpArgs, argv: Vec<String>) -> Result<()> {
    let a: IqpArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let mode = a.mode.context("--mode is required")?;
    let n = a.n.context("--n is required")?;
    let edges = a.edges.context("--edges is required")?;
    let seed = a.seed.unwrap_or(0);
    let out = a.out.as_deref().context("--out is required")?;
    let mut rng = substream(seed, Stream::Dataset);

    let mut resolved = serde_json::to_value(&a)?;
    let (spec, load, recovered) = match mode {
        IqpMode::Exact => {
            let k = a.k.unwrap_or(2);
            let spec = random_grid_spec(n, edges, k, &mut rng)?;
            let load = iqp_exact_load(&iqp_state(&spec)?, k, spec.edges.len())?;
            let ok = load.edge_set() == spec.edge_set() && load.infidelity < 1e-9;
            resolved["k"] = json!(k);
            (spec, load, ok)
        }
        IqpMode::Approx => {
            let eps = a.eps.unwrap_or(0.05);
            let spec = random_continuous_spec(n, edges, a.degree, &mut rng)?;
            let d = a.degree.unwrap_or(spec.max_degree()).max(1);
            let load = iqp_approx_load(&iqp_state(&spec)?, d, eps)?;
            let ok = load.s_final <= eps;
            resolved["eps"] = json!(eps);
            resolved["degree"] = json!(d);
            resolved["grid_k"] = json!(approx_grid_size(d, n, eps)?);
            resolved["cosine_floor"] = json!(cosine_floor(&spec));
            (spec, load, ok)
        }
        IqpMode::Shot => {
            let d = a.degree.unwrap_or(3);
            let spec = pi8_spec(n, &random_graph(n, edges, Some(d), &mut rng))?;
            let opts = ShotRecoveryOptions {
                delta: a.delta.unwrap_or(0.05),
                c: a.c.unwrap_or(SHOT_CONSTANT),
                ..ShotRecoveryOptions::new(d, 0.05, seed)
            };
            let load = iqp_shot_recover(&iqp_state(&spec)?, &opts)?;
            let ok = load.edge_set() == spec.edge_set() && load.s_final < EXACT_TOL;
            resolved["degree"] = json!(d);
            resolved["delta"] = json!(opts.delta);
            resolved["c"] = json!(opts.c);
            (spec, load, ok)
        }
    };
    let mut m = ManifestBuilder::new(argv, resolved, seed);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    let report = IqpReport {
        mode,
        n,
        e_true: spec.edge_set(),
        e_recovered: load.edge_set(),
        iterations: load.iterations(),
        shots_used: load.shots_used,
        s_final: load.s_final,
        infidelity: load.infidelity,
        recovered,
    };
    println!(
        "{:?}: {} of {} edges, S_final={:e}, infidelity={:e}",
        mode,
        report.e_recovered.len(),
        report.e_true.len(),
        report.s_final,
        report.infidelity
    );
    emit_json(&report, out, m)
}
