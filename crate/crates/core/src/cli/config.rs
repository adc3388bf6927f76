//! Optional TOML defaults, located by `KECCAK_FORGE_CONFIG`. Keys mirror the
//! long flag names; flags given on the command line win.

use std::path::Path;

use serde::Deserialize;

use super::{Format, ScenarioKind};
use crate::estimator::{CountingMode, Thresholds};
use crate::synth::SynthesisStrategy;

pub const CONFIG_ENV: &str = "KECCAK_FORGE_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub lane_width: Option<u32>,
    pub rounds: Option<usize>,
    pub round_offset: Option<usize>,
    pub strategy: Option<SynthesisStrategy>,
    pub include_inverse: Option<bool>,
    pub decomp_factor: Option<u64>,
    pub counting_mode: Option<CountingMode>,
    pub log2_search_space: Option<f64>,
    pub marked_count: Option<u64>,
    pub gate_time_ns: Option<f64>,
    pub gates_per_second: Option<f64>,
    pub error_rate: Option<f64>,
    pub logical_error_rate: Option<f64>,
    pub qec_overhead: Option<u64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub digest_width: Option<usize>,
    pub scenario: Option<Vec<ScenarioKind>>,
    pub thresholds: Option<Thresholds>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
