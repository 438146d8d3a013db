use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use qload_core::datasets::{
    amplitude_encode_real, compact_encode, ghz, ground_state, iqp_state, pad_flatten_normalize, random_circuit_state,
    random_circuit_state_2d, random_mps_state, SpinHamiltonianSpec,
};
use qload_core::iqp::{random_continuous_spec, random_grid_spec};
use qload_core::random::{substream, Stream};
use qload_core::{entanglement_measure, StateVector};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::manifest::{sha256_hex, write_json, ManifestBuilder};
use crate::qsv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    /// TFIM chain ground state.
    Tfim,
    /// XXZ ground state on a rows × cols grid.
    Xxz,
    Ghz,
    /// 1D random circuit state (W CZ gates, 3W rotations).
    Srqc,
    /// 2D random circuit state on a rows × cols grid.
    Rqc2d,
    /// IQP state on a random graph; grid angles when `--k` is set.
    Iqp,
    /// Random bond-dimension MPS.
    Mps,
    /// Amplitude or compact encoding of a vector file.
    Vector,
    /// Pad-flatten-normalize of an image vector, then amplitude encoding.
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    Amplitude,
    Compact,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct GenDatasetArgs {
    #[arg(long, value_enum)]
    pub kind: Option<DatasetKind>,
    /// Qubit count (chain length).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    #[arg(long)]
    pub jxy: Option<f64>,
    #[arg(long)]
    pub jz: Option<f64>,
    /// CZ gate count of a random circuit.
    #[arg(long)]
    pub w: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub edges: Option<usize>,
    /// IQP angle grid size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Degree cap for continuous IQP graphs.
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long)]
    pub chi: Option<usize>,
    /// Vector or image input: `.csv` text or raw little-endian f64.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub encoding: Option<Encoding>,
    #[arg(long)]
    pub image_rows: Option<usize>,
    #[arg(long)]
    pub image_cols: Option<usize>,
    /// Side of the square canvas images are padded to.
    #[arg(long)]
    pub canvas: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// File stem; defaults to the kind.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, kind: DatasetKind) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for {kind:?} datasets"))
}

fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let mut out = Vec::new();
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).comment(Some(b'#')).from_reader(&bytes[..]);
        for rec in rdr.records() {
            for field in rec?.iter() {
                let f = field.trim();
                if !f.is_empty() {
                    out.push(f.parse::<f64>().with_context(|| format!("bad number {f:?}"))?);
                }
            }
        }
        Ok(out)
    } else {
        if bytes.len() % 8 != 0 {
            bail!("raw vector file length {} is not a multiple of 8", bytes.len());
        }
        Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }
}

struct Generated {
    state: StateVector,
    params: Value,
    extra: Value,
}

fn generate(a: &GenDatasetArgs, kind: DatasetKind, seed: u64, m: &mut ManifestBuilder) -> Result<Generated> {
    let mut rng = substream(seed, Stream::Dataset);
    Ok(match kind {
        DatasetKind::Tfim => {
            let (n, j, g) = (need(a.n, "n", kind)?, a.j.unwrap_or(1.0), a.g.unwrap_or(1.0));
            let gs = ground_state(&SpinHamiltonianSpec::tfim_chain(n, j, g))?;
            Generated {
                params: json!({"n": n, "j": j, "g": g}),
                extra: json!({"energy": gs.energy, "residual": gs.residual, "lanczos_iterations": gs.iterations}),
                state: gs.state,
            }
        }
        DatasetKind::Xxz => {
            let (rows, cols) = (need(a.rows, "rows", kind)?, need(a.cols, "cols", kind)?);
            let (jxy, jz) = (a.jxy.unwrap_or(1.0), a.jz.unwrap_or(1.0));
            let gs = ground_state(&SpinHamiltonianSpec::xxz_grid(rows, cols, jxy, jz))?;
            Generated {
                params: json!({"rows": rows, "cols": cols, "jxy": jxy, "jz": jz}),
                extra: json!({"energy": gs.energy, "residual": gs.residual, "lanczos_iterations": gs.iterations}),
                state: gs.state,
            }
        }
        DatasetKind::Ghz => {
            let n = need(a.n, "n", kind)?;
            Generated { state: ghz(n)?, params: json!({"n": n}), extra: json!({}) }
        }
        DatasetKind::Srqc => {
            let (n, w) = (need(a.n, "n", kind)?, need(a.w, "w", kind)?);
            Generated {
                state: random_circuit_state(n, w, seed)?,
                params: json!({"n": n, "w": w}),
                extra: json!({"cz_pairs": "independent uniform draws; a pair may repeat across gates"}),
            }
        }
        DatasetKind::Rqc2d => {
            let (rows, cols, depth) = (need(a.rows, "rows", kind)?, need(a.cols, "cols", kind)?, need(a.depth, "depth", kind)?);
            Generated {
                state: random_circuit_state_2d(rows, cols, depth, seed)?,
                params: json!({"rows": rows, "cols": cols, "depth": depth}),
                extra: json!({}),
            }
        }
        DatasetKind::Iqp => {
            let (n, e) = (need(a.n, "n", kind)?, need(a.edges, "edges", kind)?);
            let spec = match a.k {
                Some(k) => random_grid_spec(n, e, k, &mut rng)?,
                None => random_continuous_spec(n, e, a.max_degree, &mut rng)?,
            };
            let edges: Vec<_> = spec.edges.iter().map(|&((p, q), w)| json!([p, q, w])).collect();
            Generated {
                state: iqp_state(&spec)?,
                params: json!({"n": n, "edges": e, "k": a.k, "max_degree": a.max_degree}),
                extra: json!({"graph": edges}),
            }
        }
        DatasetKind::Mps => {
            let (n, chi) = (need(a.n, "n", kind)?, a.chi.unwrap_or(2));
            Generated { state: random_mps_state(n, chi, &mut rng)?, params: json!({"n": n, "chi": chi}), extra: json!({}) }
        }
        DatasetKind::Vector | DatasetKind::Image => {
            let path = a.input.as_deref().with_context(|| format!("--input is required for {kind:?} datasets"))?;
            m.input(path)?;
            let mut v = read_vector(path)?;
            let mut params = json!({"input": path.display().to_string()});
            if kind == DatasetKind::Image {
                let (r, c) = (need(a.image_rows, "image-rows", kind)?, need(a.image_cols, "image-cols", kind)?);
                let side = a.canvas.unwrap_or(32);
                v = pad_flatten_normalize(&v, r, c, side, side)?;
                params = json!({"input": path.display().to_string(), "image_rows": r, "image_cols": c, "canvas": side});
            }
            let enc = a.encoding.unwrap_or(Encoding::Amplitude);
            params["encoding"] = serde_json::to_value(enc)?;
            let state = match enc {
                Encoding::Amplitude => amplitude_encode_real(&v)?,
                Encoding::Compact => compact_encode(&v)?,
            };
            Generated { state, params, extra: json!({"length": v.len()}) }
        }
    })
}

pub fn run(flags: &GenDatasetArgs, argv: Vec<String>) -> Result<()> {
    let a: GenDatasetArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let kind = a.kind.context("--kind is required")?;
    let seed = a.seed.unwrap_or(0);
    let out_dir = a.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let name = a.name.clone().unwrap_or_else(|| serde_json::to_value(kind).unwrap().as_str().unwrap().to_string());

    let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seed);
    if let Some(c) = flags.config.as_deref() {
        m.input(c)?;
    }
    let gen = generate(&a, kind, seed, &mut m)?;
    let file = out_dir.join(format!("{name}.qsv"));
    let bytes = qsv::encode(&gen.state);
    std::fs::write(&file, &bytes).with_context(|| format!("writing {}", file.display()))?;
    m.output(&file);

    let report = entanglement_measure(&gen.state)?;
    let manifest = json!({
        "kind": kind,
        "params": gen.params,
        "seed": seed,
        "file": file.file_name().unwrap().to_string_lossy(),
        "num_qubits": gen.state.num_qubits(),
        "sha256": sha256_hex(&bytes),
        "S": report.total,
        "details": gen.extra,
        "run": m.finish()?,
    });
    let path = out_dir.join(format!("{name}.json"));
    write_json(&path, &manifest)?;
    println!("{}", file.display());
    Ok(())
}
