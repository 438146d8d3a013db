use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use qload_core::aqer::{run_aqer, AqerConfig};
use qload_core::baselines::{aqce_run, hec_build, hec_train, mps_loader, AqceInit, AqceOptions};
use qload_core::optim::AdamOptions;
use qload_core::StateVector;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{emit_json, load_target};
use crate::manifest::{write_json, ManifestBuilder};
use crate::report::LoaderReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoaderMethod {
    Aqer,
    Mps,
    Hec,
    Aqce,
}

impl LoaderMethod {
    pub fn name(self) -> &'static str {
        match self {
            LoaderMethod::Aqer => "aqer",
            LoaderMethod::Mps => "mps",
            LoaderMethod::Hec => "hec",
            LoaderMethod::Aqce => "aqce",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AqceStart {
    Zero,
    Product,
}

/// Loader knobs shared by `run` and `sweep`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct LoaderArgs {
    /// Step-III Adam iterations (AQER) or training iterations (HEC).
    #[arg(long)]
    pub t3: Option<usize>,
    /// Adam learning rate (AQER Step III and HEC).
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub nm_tol: Option<f64>,
    #[arg(long)]
    pub nm_max_iter: Option<usize>,
    /// Restrict AQER candidates to these pairs, written `j-k`.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pub pairs: Option<Vec<(usize, usize)>>,
    /// AQCE units added per expansion.
    #[arg(long)]
    pub units_per_expansion: Option<usize>,
    /// AQCE sweeps after each expansion.
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long, value_enum)]
    pub aqce_init: Option<AqceStart>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("pair {s:?} is not j-k"))?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

impl LoaderArgs {
    pub fn aqer_config(&self, t: usize, shots: Option<u64>, seed: u64) -> AqerConfig {
        let d = AqerConfig::default();
        AqerConfig {
            t,
            t3: self.t3.unwrap_or(d.t3),
            lr: self.lr.unwrap_or(d.lr),
            nm_tol: self.nm_tol.unwrap_or(d.nm_tol),
            nm_max_iter: self.nm_max_iter.unwrap_or(d.nm_max_iter),
            shots,
            seed,
            pair_set: self.pairs.clone(),
        }
    }

    pub fn aqce_options(&self) -> AqceOptions {
        let d = AqceOptions::default();
        AqceOptions {
            units_per_expansion: self.units_per_expansion.unwrap_or(d.units_per_expansion),
            sweeps_per_expansion: self.sweeps.unwrap_or(d.sweeps_per_expansion),
            init: match self.aqce_init {
                Some(AqceStart::Zero) => AqceInit::Zero,
                Some(AqceStart::Product) => AqceInit::Product,
                None => d.init,
            },
            verify: false,
        }
    }

    pub fn adam_options(&self) -> AdamOptions {
        let d = AdamOptions::default();
        AdamOptions::new(self.lr.unwrap_or(d.lr), self.t3.unwrap_or(d.iters))
    }
}

/// Runs one loader. `size` is the AQER iteration count `T`, the MPS or HEC
/// layer count, or the AQCE unit count.
pub fn run_loader(
    method: LoaderMethod,
    target: &StateVector,
    size: usize,
    shots: Option<u64>,
    seed: u64,
    l: &LoaderArgs,
) -> Result<LoaderReport> {
    if shots.is_some() && method != LoaderMethod::Aqer {
        anyhow::bail!("shot mode is only available for aqer");
    }
    Ok(match method {
        LoaderMethod::Aqer => LoaderReport::from_aqer(&run_aqer(target, &l.aqer_config(size, shots, seed))?),
        LoaderMethod::Mps => {
            let (_, r) = mps_loader(target, size)?;
            LoaderReport::from_baseline("mps", json!({"layers": size, "real": r.real}), &r)
        }
        LoaderMethod::Hec => {
            let opts = l.adam_options();
            let r = hec_train(target, &hec_build(target.num_qubits(), size)?, seed, &opts)?;
            let cfg = json!({"layers": size, "seed": seed, "lr": opts.lr, "iters": opts.iters});
            LoaderReport::from_baseline("hec", cfg, &r)
        }
        LoaderMethod::Aqce => {
            let opts = l.aqce_options();
            let (st, r) = aqce_run(target, size, &opts)?;
            let cfg = json!({
                "units": size,
                "units_per_expansion": opts.units_per_expansion,
                "sweeps_per_expansion": opts.sweeps_per_expansion,
                "init": format!("{:?}", opts.init).to_lowercase(),
                "real": r.real,
                "skipped_updates": st.skipped,
            });
            let mut rep = LoaderReport::from_baseline("aqce", cfg, &r);
            rep.loss_trace = st.fidelity_trace.iter().map(|f| 1.0 - f).collect();
            rep
        }
    })
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub method: Option<LoaderMethod>,
    /// QSV1 target state.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Result JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the loader circuit as circuit JSON.
    #[arg(long)]
    pub circuit_out: Option<PathBuf>,
    /// AQER iterations `T`; MPS/HEC layers; AQCE units.
    #[arg(long, short = 't')]
    pub t: Option<usize>,
    /// Shots per expectation value (AQER only); exact when omitted.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub loader: LoaderArgs,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub fn run(flags: &RunArgs, argv: Vec<String>) -> Result<()> {
    let a: RunArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let method = a.method.context("a method is required")?;
    let target_path = a.target.as_deref().context("--target is required")?;
    let out = a.out.as_deref().context("--out is required")?;
    let seed = a.seed.unwrap_or(0);
    let size = a.t.context("-t/--t is required")?;

    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seed);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    let target = load_target(target_path, &mut m)?;
    let report = run_loader(method, &target, size, a.shots, seed, &a.loader)?;
    if let Some(path) = a.circuit_out.as_deref() {
        write_json(path, &report.circuit)?;
        m.output(path);
    }
    println!(
        "{} G={} infidelity_final={:e}",
        method.name(),
        report.g,
        report.infidelity_final
    );
    emit_json(&report, out, m)
}
