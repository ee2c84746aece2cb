//! Named, seeded experiments with pass/fail criteria and serializable reports.

mod calibration;
mod cheeger;
mod construction;
mod jacobi;
mod obstruction;
mod report;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{DiagramError, FamilyParams};
use crate::geometry::GeometryError;

pub use calibration::{run_hopf_cp2, run_product_s3s5, run_round_s5};
pub use cheeger::run_cheeger_s3s3;
pub use construction::{run_construction_s3xcp2, run_s2xcp2, T_GRID};
pub use jacobi::run_jacobi_audit;
pub use obstruction::{run_obstruction, run_obstruction_diagram, run_obstruction_table, TABLE_FAMILIES};
pub use report::{emit_report, render_report, Criterion, ReportFormat, ScenarioResult};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unknown report format `{0}` (expected json or csv)")]
    UnknownFormat(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

/// Command line style overrides; `None` means the scenario default.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub l: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub family: Option<String>,
    pub params: FamilyParams,
}

/// Scenario ids with their default seeds.
pub const SCENARIOS: [(&str, u64); 8] = [
    ("round-s5", 11),
    ("hopf-cp2", 12),
    ("product-s3s5", 13),
    ("cheeger-s3s3", 14),
    ("s3xcp2", 15),
    ("s2xcp2", 16),
    ("obstruction", 17),
    ("jacobi", 18),
];

pub fn default_seed(name: &str) -> Option<u64> {
    SCENARIOS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Dispatches a scenario by id.
pub fn run(name: &str, opts: &RunOptions) -> Result<ScenarioResult, ScenarioError> {
    let seed = opts.seed.or_else(|| default_seed(name)).ok_or_else(|| ScenarioError::UnknownScenario(name.into()))?;
    let l = opts.l.unwrap_or(1.0);
    if name != "obstruction" && (opts.family.is_some() || !opts.params.is_empty()) {
        return Err(ScenarioError::InvalidOption(format!("--family/--param only apply to obstruction, not {name}")));
    }
    match name {
        "round-s5" => run_round_s5(opts.samples.unwrap_or(100), seed),
        "hopf-cp2" => run_hopf_cp2(opts.samples.unwrap_or(200), seed),
        "product-s3s5" => run_product_s3s5(opts.samples.unwrap_or(4096), seed),
        "cheeger-s3s3" => run_cheeger_s3s3(l, opts.samples.unwrap_or(10_000), seed),
        "s3xcp2" => run_construction_s3xcp2(l, T_GRID, opts.samples.unwrap_or(2048), seed),
        "s2xcp2" => run_s2xcp2(l, opts.samples.unwrap_or(2048), seed),
        "obstruction" => {
            let trials = opts.trials.unwrap_or(100);
            match &opts.family {
                Some(f) => run_obstruction(f, &opts.params, trials, seed),
                None if opts.params.is_empty() => run_obstruction_table(trials, seed),
                None => Err(ScenarioError::InvalidOption("--param needs --family".into())),
            }
        }
        "jacobi" => run_jacobi_audit(opts.l, seed),
        _ => Err(ScenarioError::UnknownScenario(name.into())),
    }
}

pub(crate) fn params<const N: usize>(pairs: [(&str, serde_json::Value); N]) -> BTreeMap<String, serde_json::Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

pub(crate) fn elapsed_ms(start: std::time::Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

pub(crate) fn check_samples(samples: usize, min: usize) -> Result<(), ScenarioError> {
    if samples < min {
        return Err(ScenarioError::InvalidOption(format!("samples must be at least {min}")));
    }
    Ok(())
}

pub(crate) fn check_l(l: f64) -> Result<(), ScenarioError> {
    if !(l > 0.0 && l.is_finite()) {
        return Err(ScenarioError::InvalidOption(format!("l = {l} must be positive")));
    }
    Ok(())
}
