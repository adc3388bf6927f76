//! Gate tallies to runtime, error accumulation, physical-qubit projections and
//! feasibility verdicts.

mod cost;
pub mod pipeline;
pub mod render;
pub mod report;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::GateStats;

pub use cost::{CostModel, CountingMode};
pub use pipeline::{run_pipeline, PipelineConfig};
pub use report::{feasibility_report, Capability, FeasibilityReport, Span, Thresholds, Verdict};

pub const SECONDS_PER_DAY: f64 = 86_400.0;
/// Julian year.
pub const SECONDS_PER_YEAR: f64 = 31_557_600.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("decomposition factor must be at least 1")]
    DecompFactor,
    #[error("at least one scenario is required")]
    NoScenarios,
    #[error("scenario {name:?}: {reason}")]
    Scenario { name: String, reason: &'static str },
    #[error("unknown scenario {0:?} (expected optimistic or conservative)")]
    UnknownScenario(String),
    #[error("threshold {0}: range minimum exceeds maximum")]
    Thresholds(&'static str),
    #[error(transparent)]
    Synth(#[from] crate::synth::SynthError),
    #[error(transparent)]
    Grover(#[from] crate::grover::GroverError),
}

/// Two-qubit gates charged per oracle call.
pub fn gates_per_oracle(stats: &GateStats, model: &CostModel) -> u64 {
    let toffoli = stats.toffoli_count * model.decomp_factor;
    match model.counting_mode {
        CountingMode::Headline => toffoli,
        CountingMode::Exact => stats.cnot_count + toffoli,
    }
}

/// Two-qubit gates over the whole search. Headline mode charges the
/// diffusion step the same as the oracle and ignores `diffusion_gates`.
pub fn total_grover_gates(iterations: u64, gates_per_oracle: u64, diffusion_gates: u64, model: &CostModel) -> f64 {
    let per_iteration = match model.counting_mode {
        CountingMode::Headline => 2 * gates_per_oracle as u128,
        CountingMode::Exact => gates_per_oracle as u128 + diffusion_gates as u128,
    };
    (iterations as u128 * per_iteration) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    GateTimeNs(f64),
    GatesPerSecond(f64),
}

impl Timing {
    pub fn seconds(self, gates: f64) -> f64 {
        match self {
            Timing::GateTimeNs(ns) => gates * ns * 1e-9,
            Timing::GatesPerSecond(rate) => gates / rate,
        }
    }

    pub fn describe(self) -> String {
        match self {
            Timing::GateTimeNs(ns) => format!("{ns} ns/gate"),
            Timing::GatesPerSecond(r) => format!("{r} gates/s"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub timing: Timing,
    pub physical_error_rate: f64,
    pub logical_error_rate: f64,
    pub qec_overhead: u64,
}

impl Scenario {
    pub const OPTIMISTIC: &'static str = "optimistic";
    pub const CONSERVATIVE: &'static str = "conservative";

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let fail = |reason| {
            Err(EstimatorError::Scenario {
                name: self.name.clone(),
                reason,
            })
        };
        let t = match self.timing {
            Timing::GateTimeNs(t) | Timing::GatesPerSecond(t) => t,
        };
        if !(t.is_finite() && t > 0.0) {
            return fail("timing must be positive");
        }
        let unit = |p: f64| p > 0.0 && p < 1.0;
        if !unit(self.physical_error_rate) || !unit(self.logical_error_rate) {
            return fail("error rates must lie in (0, 1)");
        }
        if self.qec_overhead == 0 {
            return fail("QEC overhead must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Runtime {
    pub seconds: f64,
    pub days: f64,
    pub years: f64,
}

pub fn runtime(total_gates: f64, scenario: &Scenario) -> Runtime {
    let seconds = scenario.timing.seconds(total_gates);
    Runtime {
        seconds,
        days: seconds / SECONDS_PER_DAY,
        years: seconds / SECONDS_PER_YEAR,
    }
}

/// Probability that at least one of `gates` independent gates fails.
pub fn error_probability(per_gate: f64, gates: f64) -> f64 {
    if gates <= 0.0 || per_gate <= 0.0 {
        return 0.0;
    }
    (-(gates * (-per_gate).ln_1p()).exp_m1()).clamp(0.0, 1.0)
}

pub fn physical_qubits(logical: u64, qec_overhead: u64) -> u64 {
    logical.saturating_mul(qec_overhead)
}
