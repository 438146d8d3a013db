//! Loader result JSON shared by AQER and the baselines.

use qload_core::aqer::{AqerConfig, AqerResult};
use qload_core::baselines::BaselineResult;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::circuit_json::CircuitJson;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoaderReport {
    pub method: String,
    pub config: Value,
    pub s_trace: Vec<f64>,
    pub loss_trace: Vec<f64>,
    /// Infidelity before fine-tuning; `null` for methods without that stage.
    pub infidelity_initial: Option<f64>,
    pub infidelity_final: f64,
    #[serde(rename = "G")]
    pub g: usize,
    pub circuit: CircuitJson,
    pub theta_star: Vec<f64>,
    /// Total entanglement `S(v_T)` after Step I (AQER only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub s_final: Option<f64>,
}

pub fn aqer_config_json(cfg: &AqerConfig) -> Value {
    serde_json::json!({
        "T": cfg.t,
        "T3": cfg.t3,
        "lr": cfg.lr,
        "nm_tol": cfg.nm_tol,
        "nm_max_iter": cfg.nm_max_iter,
        "shots": cfg.shots,
        "seed": cfg.seed,
        "pair_set": cfg.pair_set,
    })
}

impl LoaderReport {
    pub fn from_aqer(r: &AqerResult) -> Self {
        Self {
            method: "aqer".into(),
            config: aqer_config_json(&r.config),
            s_trace: std::iter::once(r.s_initial).chain(r.s_trace.iter().copied()).collect(),
            loss_trace: r.loss_trace.clone(),
            infidelity_initial: Some(r.infidelity_initial),
            infidelity_final: r.infidelity_final,
            g: r.g,
            circuit: CircuitJson::from(&r.circuit),
            theta_star: r.theta_star.clone(),
            s_final: Some(r.s_final),
        }
    }

    pub fn from_baseline(method: &str, config: Value, r: &BaselineResult) -> Self {
        Self {
            method: method.into(),
            config,
            s_trace: Vec::new(),
            loss_trace: Vec::new(),
            infidelity_initial: None,
            infidelity_final: r.infidelity,
            g: r.g,
            circuit: CircuitJson::from(&r.circuit),
            theta_star: r.params.clone(),
            s_final: None,
        }
    }
}
