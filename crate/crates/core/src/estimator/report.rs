//! Capability thresholds and the two feasibility tables.

use serde::{Deserialize, Serialize};

use super::{error_probability, physical_qubits, runtime, EstimatorError, Runtime, Scenario};
use crate::circuit::GateStats;
use crate::grover::{GroverEstimate, GroverParams, Speedup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Severe,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Feasible => "FEASIBLE",
            Verdict::Infeasible => "INFEASIBLE",
            Verdict::Severe => "SEVERE",
        }
    }
}

/// Closed interval of a hardware figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span {
    pub min: f64,
    pub max: f64,
}

impl Span {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub const fn point(v: f64) -> Self {
        Self { min: v, max: v }
    }
}

/// One Table 1 row's hardware columns. `None` means not applicable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Capability {
    pub nisq: Option<Span>,
    pub early_ft: Option<Span>,
    /// Verdict emitted when the requirement exceeds the NISQ column.
    pub infeasible: Verdict,
}

impl Capability {
    const fn new(nisq: Option<Span>, early_ft: Option<Span>, infeasible: Verdict) -> Self {
        Self {
            nisq,
            early_ft,
            infeasible,
        }
    }

    /// Requirement is a resource amount; hardware must offer at least that much.
    fn judge_amount(&self, requirement: f64) -> Verdict {
        match self.nisq {
            Some(s) if requirement > s.max => self.infeasible,
            _ => Verdict::Feasible,
        }
    }

    /// Requirement is a per-gate error budget; hardware must be at least that good.
    fn judge_error(&self, budget: f64) -> Verdict {
        match self.nisq {
            Some(s) if s.min > budget => self.infeasible,
            _ => Verdict::Feasible,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    pub logical_qubits: Capability,
    pub toffoli_per_oracle: Capability,
    pub total_2q_gates: Capability,
    pub error_rate: Capability,
    pub physical_qubits: Capability,
    /// Longest run still counted as a usable attack.
    pub max_runtime_years: f64,
    /// Error probability above which a run is considered failed.
    pub max_error_probability: f64,
    /// Error probability at which the risk is reported as CERTAIN.
    pub certain_error_probability: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        use Verdict::*;
        Self {
            logical_qubits: Capability::new(Some(Span::new(100.0, 1000.0)), Some(Span::new(1e4, 1e5)), Infeasible),
            toffoli_per_oracle: Capability::new(None, None, Infeasible),
            total_2q_gates: Capability::new(Some(Span::point(1e3)), Some(Span::point(1e6)), Infeasible),
            error_rate: Capability::new(Some(Span::point(1e-3)), Some(Span::point(1e-4)), Infeasible),
            physical_qubits: Capability::new(Some(Span::point(1e3)), Some(Span::new(1e5, 1e6)), Severe),
            max_runtime_years: 1.0,
            max_error_probability: 0.5,
            certain_error_probability: 1.0 - 1e-9,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<(), EstimatorError> {
        let rows = [
            ("logical_qubits", &self.logical_qubits),
            ("toffoli_per_oracle", &self.toffoli_per_oracle),
            ("total_2q_gates", &self.total_2q_gates),
            ("error_rate", &self.error_rate),
            ("physical_qubits", &self.physical_qubits),
        ];
        for (name, cap) in rows {
            for span in [cap.nisq, cap.early_ft].into_iter().flatten() {
                if span.min > span.max || span.min.is_nan() || span.max.is_nan() {
                    return Err(EstimatorError::Thresholds(name));
                }
            }
        }
        Ok(())
    }
}

/// Gate tallies feeding the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCounts {
    pub logical_qubits: u64,
    /// Forward permutation alone.
    pub forward: GateStats,
    /// The circuit charged per oracle call.
    pub oracle: GateStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diffusion: Option<GateStats>,
    pub gates_per_oracle: u64,
    pub diffusion_gates: u64,
    pub total_2q_gates: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroverSummary {
    pub params: GroverParams,
    pub search_space: f64,
    pub estimate: GroverEstimate,
    pub speedup: Speedup,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub scenario: Scenario,
    pub runtime: Runtime,
    pub physical_error_probability: f64,
    pub logical_error_probability: f64,
    pub physical_qubits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub resource: &'static str,
    pub requirement: f64,
    /// What the requirement figure measures.
    pub basis: &'static str,
    pub nisq: Option<Span>,
    pub early_ft: Option<Span>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table2Cell {
    pub dimension: &'static str,
    pub metric: &'static str,
    pub scenario: String,
    pub value: f64,
    /// Display form of `value` (e.g. a risk label).
    pub display: String,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub inputs: serde_json::Value,
    pub counts: OracleCounts,
    pub grover: GroverSummary,
    pub scenarios: Vec<ScenarioResult>,
    pub table1: Vec<Table1Row>,
    pub table2: Vec<Table2Cell>,
}

pub const TABLE1_ROWS: [&str; 5] = [
    "Logical Qubits",
    "Toffoli Gates (per oracle)",
    "Total 2Q Gate Depth",
    "Error Rate Tolerance",
    "Physical Qubits (with QEC)",
];

pub const TABLE2_DIMENSIONS: [&str; 4] = [
    "Physical Qubits",
    "Execution Time",
    "Error Accumulation",
    "Cryptanalytic Utility",
];

fn risk_label(p: f64, t: &Thresholds) -> &'static str {
    if p >= t.certain_error_probability {
        "CERTAIN"
    } else if p > t.max_error_probability {
        "HIGH"
    } else {
        "LOW"
    }
}

fn duration_label(r: &Runtime) -> String {
    if r.years >= 1.0 {
        format!("{:.0} years", r.years)
    } else if r.days >= 1.0 {
        format!("{:.1} days", r.days)
    } else {
        format!("{:.3e} s", r.seconds)
    }
}

/// Both feasibility tables from precomputed counts.
///
/// Table 1's error row and physical-qubit row use the first scenario's
/// logical error rate and QEC overhead.
pub fn feasibility_report(
    inputs: serde_json::Value,
    counts: OracleCounts,
    grover: GroverSummary,
    scenarios: &[Scenario],
    thresholds: &Thresholds,
) -> Result<FeasibilityReport, EstimatorError> {
    let Some(first) = scenarios.first() else {
        return Err(EstimatorError::NoScenarios);
    };
    thresholds.validate()?;
    for s in scenarios {
        s.validate()?;
    }

    let results: Vec<ScenarioResult> = scenarios
        .iter()
        .map(|s| ScenarioResult {
            scenario: s.clone(),
            runtime: runtime(counts.total_2q_gates, s),
            physical_error_probability: error_probability(s.physical_error_rate, counts.total_2q_gates),
            logical_error_probability: error_probability(s.logical_error_rate, counts.total_2q_gates),
            physical_qubits: physical_qubits(counts.logical_qubits, s.qec_overhead),
        })
        .collect();

    let t = thresholds;
    let logical = counts.logical_qubits as f64;
    let toffoli = counts.oracle.toffoli_count as f64;
    let physical = physical_qubits(counts.logical_qubits, first.qec_overhead) as f64;
    let row = |resource, requirement, basis, cap: &Capability, verdict| Table1Row {
        resource,
        requirement,
        basis,
        nisq: cap.nisq,
        early_ft: cap.early_ft,
        verdict,
    };
    let table1 = vec![
        row(
            TABLE1_ROWS[0],
            logical,
            "wires",
            &t.logical_qubits,
            t.logical_qubits.judge_amount(logical),
        ),
        row(
            TABLE1_ROWS[1],
            toffoli,
            "toffoli count",
            &t.toffoli_per_oracle,
            t.toffoli_per_oracle.judge_amount(toffoli),
        ),
        row(
            TABLE1_ROWS[2],
            counts.total_2q_gates,
            "gate count",
            &t.total_2q_gates,
            t.total_2q_gates.judge_amount(counts.total_2q_gates),
        ),
        row(
            TABLE1_ROWS[3],
            first.logical_error_rate,
            "per-gate error",
            &t.error_rate,
            t.error_rate.judge_error(first.logical_error_rate),
        ),
        row(
            TABLE1_ROWS[4],
            physical,
            "logical x QEC overhead",
            &t.physical_qubits,
            t.physical_qubits.judge_amount(physical),
        ),
    ];

    let max_physical = t.physical_qubits.early_ft.map_or(f64::INFINITY, |s| s.max);
    let mut table2 = Vec::new();
    for r in &results {
        let name = r.scenario.name.clone();
        let qubits_ok = r.physical_qubits as f64 <= max_physical;
        let errors_ok = r.logical_error_probability <= t.max_error_probability;
        let time_ok = r.runtime.years <= t.max_runtime_years && errors_ok;
        let mut cell = |dimension, metric, value: f64, display: String, feasible| {
            table2.push(Table2Cell {
                dimension,
                metric,
                scenario: name.clone(),
                value,
                display,
                feasible,
            })
        };
        cell(
            TABLE2_DIMENSIONS[0],
            "Required",
            r.physical_qubits as f64,
            format!("{:.1} million", r.physical_qubits as f64 / 1e6),
            qubits_ok,
        );
        cell(
            TABLE2_DIMENSIONS[1],
            "Required",
            r.runtime.years,
            duration_label(&r.runtime),
            time_ok,
        );
        cell(
            TABLE2_DIMENSIONS[2],
            "Risk",
            r.logical_error_probability,
            risk_label(r.logical_error_probability, t).to_string(),
            errors_ok,
        );
        let useful = qubits_ok && time_ok && errors_ok;
        cell(
            TABLE2_DIMENSIONS[3],
            "Practical?",
            useful as u8 as f64,
            if useful { "YES" } else { "NO" }.to_string(),
            useful,
        );
    }

    Ok(FeasibilityReport {
        inputs,
        counts,
        grover,
        scenarios: results,
        table1,
        table2,
    })
}
