use serde::{Deserialize, Serialize};

/// How gate tallies become two-qubit-gate totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingMode {
    /// Forward-permutation Toffolis times the decomposition factor, doubled
    /// per Grover iteration for the diffusion step. Reproduces the headline
    /// accounting.
    #[default]
    #[serde(rename = "paper")]
    Headline,
    /// Every CNOT and Toffoli of the full synthesized oracle (forward pass,
    /// comparator, inverse pass) plus a synthesized diffusion proxy.
    Exact,
}

impl CountingMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CountingMode::Headline => "paper",
            CountingMode::Exact => "exact",
        }
    }
}

/// Decomposition factor and counting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostModel {
    /// Two-qubit gates per Toffoli; 10 is the conservative end of 10–20.
    pub decomp_factor: u64,
    pub counting_mode: CountingMode,
}

impl CostModel {
    pub const DEFAULT_DECOMP_FACTOR: u64 = 10;

    pub fn new(decomp_factor: u64, counting_mode: CountingMode) -> Result<Self, super::EstimatorError> {
        if decomp_factor == 0 {
            return Err(super::EstimatorError::DecompFactor);
        }
        Ok(Self {
            decomp_factor,
            counting_mode,
        })
    }
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            decomp_factor: Self::DEFAULT_DECOMP_FACTOR,
            counting_mode: CountingMode::Headline,
        }
    }
}
