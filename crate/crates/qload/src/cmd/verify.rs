//! Fast in-process run of the core invariants at small sizes. The full
//! property suites live in the crates' test directories.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Result};
use clap::Args;
use qload_core::aqer::{run_aqer, AqerConfig};
use qload_core::baselines::{aqce_run, mps_loader, AqceInit, AqceOptions};
use qload_core::datasets::{dense_ground_state, ghz, ground_state, iqp_state, random_mps_state, SpinHamiltonianSpec};
use qload_core::entropy::{overlap_with, product_amplitudes};
use qload_core::iqp::{iqp_exact_load, iqp_residual_state, iqp_x_formula, random_continuous_spec, random_grid_spec};
use qload_core::noisy::verify_depol_bounds;
use qload_core::optim::{adjoint_gradient, infidelity_loss, paramshift_gradient};
use qload_core::random::{child_stream, random_rdm1, random_state, Stream};
use qload_core::{
    apply_gate, bound_f1, bound_f2, max_product_fidelity, pauli_expectation, product_params, Circuit, GateOp, Pauli,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::emit_json;
use crate::manifest::ManifestBuilder;
use crate::qsv;

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Optional JSON report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

fn random_circuit(n: usize, p: usize, rng: &mut ChaCha8Rng) -> (Circuit, Vec<f64>) {
    let mut c = Circuit::new(n);
    for slot in 0..p {
        let q = rng.random_range(0..n);
        let gate = match rng.random_range(0..3) {
            0 => GateOp::ry(q, 0.0),
            1 => GateOp::rz(q, 0.0),
            _ => GateOp::rzz(q, (q + 1 + rng.random_range(0..n - 1)) % n, 0.0),
        };
        c.push_slot(gate, slot).unwrap();
        if rng.random_bool(0.3) {
            let a = rng.random_range(0..n);
            c.push(GateOp::cz(a, (a + 1) % n)).unwrap();
        }
    }
    let params = (0..p).map(|_| rng.random_range(-3.2..3.2)).collect();
    (c, params)
}

fn qsv_round_trip(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let s = random_state(8, rng);
    let bytes = qsv::encode(&s);
    let back = qsv::decode(&bytes)?;
    let ok = qsv::encode(&back) == bytes && back == s;
    Ok((ok, format!("{} bytes", bytes.len())))
}

fn norm_preservation(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=6);
        let (c, params) = random_circuit(n, 1, rng);
        let gate = c.bound_gate(0, &params);
        let out = apply_gate(&random_state(n, rng), &gate)?;
        worst = worst.max((out.norm() - 1.0).abs());
    }
    Ok((worst < 1e-12, format!("max norm drift {worst:e}")))
}

fn bound_sandwich(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..40 {
        let n = rng.random_range(2..=5);
        let target = random_state(n, rng);
        let r = run_aqer(&target, &AqerConfig { t: rng.random_range(0..=2), t3: 0, ..AqerConfig::default() })?;
        let s = r.s_final;
        worst = worst.max(bound_f1(s, n)? - r.infidelity_initial).max(r.infidelity_initial - bound_f2(s)?);
    }
    Ok((worst <= 1e-9, format!("worst excess {worst:e}")))
}

fn product_optimality(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rho = random_rdm1(rng);
        let top = rho.eigenvalues().1;
        let pp = product_params(&rho);
        let got = overlap_with(&rho, &product_amplitudes(pp.beta, pp.gamma));
        worst = worst.max((got - top).abs()).max((max_product_fidelity(&rho)? - top).abs());
    }
    Ok((worst < 1e-9, format!("max gap {worst:e}")))
}

fn gradients(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let (mut fd_worst, mut ps_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let n = rng.random_range(2..=5);
        let p = rng.random_range(1..=20);
        let target = random_state(n, rng);
        let (c, x) = random_circuit(n, p, rng);
        let (_, g) = adjoint_gradient(&target, &c, &x)?;
        let (_, gp) = paramshift_gradient(&target, &c, &x, None, rng)?;
        let h = 1e-5;
        let mut diff = 0.0;
        let mut norm = 0.0;
        for j in 0..p {
            let (mut a, mut b) = (x.clone(), x.clone());
            a[j] += h;
            b[j] -= h;
            let fd = (infidelity_loss(&target, &c, &a)? - infidelity_loss(&target, &c, &b)?) / (2.0 * h);
            diff += (g[j] - fd) * (g[j] - fd);
            norm += fd * fd;
            ps_worst = ps_worst.max((g[j] - gp[j]).abs());
        }
        fd_worst = fd_worst.max(diff.sqrt() / (norm.sqrt() + 1e-4));
    }
    Ok((fd_worst < 1e-6 && ps_worst < 1e-10, format!("fd rel {fd_worst:e}, shift {ps_worst:e}")))
}

fn aqce_monotone(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let opts = AqceOptions { units_per_expansion: 2, sweeps_per_expansion: 3, init: AqceInit::Zero, verify: true };
    let mut worst: f64 = 0.0;
    for _ in 0..5 {
        let (st, _) = aqce_run(&random_state(5, rng), 4, &opts)?;
        for (a, b) in st.fidelity_trace.iter().zip(&st.verified_fidelity) {
            worst = worst.max((a - b).abs());
        }
        for w in st.fidelity_trace.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
    }
    Ok((worst < 1e-10, format!("worst {worst:e}")))
}

fn mps_exact(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        worst = worst.max(mps_loader(&ghz(n)?, 1)?.1.infidelity);
        worst = worst.max(mps_loader(&random_mps_state(n, 2, rng)?, 1)?.1.infidelity);
    }
    Ok((worst < 1e-9, format!("max infidelity {worst:e}")))
}

fn depol_bounds(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        worst = worst.max(verify_depol_bounds(n, 10, &[0.0, 0.05, 0.2, 0.5, 1.0], rng.random())?.max_violation);
    }
    Ok((worst <= 1e-9, format!("max violation {worst:e}")))
}

fn iqp_checks(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.random_range(2..=6);
        let spec = random_continuous_spec(n, rng.random_range(0..=n), None, rng)?;
        let residual = iqp_residual_state(&spec)?;
        for q in 0..n {
            let x = iqp_x_formula(&spec, q)?;
            worst = worst.max((x - pauli_expectation(&residual, Pauli::X, q)?).abs());
        }
    }
    let mut exact = 0;
    for _ in 0..10 {
        let n = rng.random_range(2..=6);
        let spec = random_grid_spec(n, rng.random_range(1..=n), 2, rng)?;
        let load = iqp_exact_load(&iqp_state(&spec)?, 2, spec.edges.len())?;
        exact += usize::from(load.infidelity < 1e-9);
    }
    Ok((worst < 1e-12 && exact == 10, format!("x-formula gap {worst:e}, exact {exact}/10")))
}

fn lanczos(_: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let spec = SpinHamiltonianSpec::tfim_chain(8, 1.0, 0.9);
    let (a, b) = (ground_state(&spec)?, dense_ground_state(&spec)?);
    let gap = (a.energy - b.energy).abs();
    let f = qload_core::fidelity(&a.state, &b.state)?;
    Ok((gap < 1e-8 && 1.0 - f < 1e-8, format!("energy gap {gap:e}")))
}

const CHECKS: [(&str, Check); 10] = [
    ("qsv-round-trip", qsv_round_trip),
    ("norm-preservation", norm_preservation),
    ("bound-sandwich", bound_sandwich),
    ("product-optimality", product_optimality),
    ("gradients", gradients),
    ("aqce-monotone", aqce_monotone),
    ("mps-exact", mps_exact),
    ("depolarizing-bounds", depol_bounds),
    ("iqp", iqp_checks),
    ("lanczos-vs-dense", lanczos),
];

pub fn run_checks(seed: u64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = child_stream(seed, Stream::Dataset, i as u64);
            let start = Instant::now();
            let (passed, detail) = match check(&mut rng) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e:#}")),
            };
            CheckResult { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
        })
        .collect()
}

pub fn run(flags: &VerifyArgs, argv: Vec<String>) -> Result<()> {
    let a: VerifyArgs = crate::config::merge(flags, flags.config.as_deref())?;
    let seed = a.seed.unwrap_or(0);
    let results = run_checks(seed);
    for r in &results {
        println!("{:<22} {}  {} ({:.2}s)", r.name, if r.passed { "PASS" } else { "FAIL" }, r.detail, r.seconds);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if let Some(out) = a.out.as_deref() {
        let mut m = ManifestBuilder::new(argv, serde_json::to_value(&a)?, seed);
        if let Some(c) = flags.config.as_deref() {
            m.input(c)?;
        }
        emit_json(&results, out, m)?;
    }
    if failed > 0 {
        bail!("{failed} check(s) failed");
    }
    Ok(())
}
