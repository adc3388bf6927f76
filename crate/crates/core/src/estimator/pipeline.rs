//! End-to-end estimate: synthesize, count, apply Grover arithmetic, judge.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::report::{GroverSummary, OracleCounts};
use super::{
    feasibility_report, gates_per_oracle, total_grover_gates, CostModel, CountingMode, EstimatorError,
    FeasibilityReport, Scenario, Thresholds,
};
use crate::grover::{self, GroverParams};
use crate::keccak_ref::KeccakParams;
use crate::synth::{self, OracleSpec, SynthesisStrategy};

/// Digest width compared by the exact-mode oracle, capped at the state size.
pub const DEFAULT_DIGEST_WIDTH: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub params: KeccakParams,
    pub strategy: SynthesisStrategy,
    pub include_inverse: bool,
    pub cost: CostModel,
    pub grover: GroverParams,
    pub scenarios: Vec<Scenario>,
    pub thresholds: Thresholds,
    pub digest_width: usize,
    /// Seeds the exact-mode target digest.
    pub seed: u64,
}

/// Target digest drawn from `seed`.
pub fn random_target(width: usize, seed: u64) -> Vec<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..width).map(|_| rng.random()).collect()
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<FeasibilityReport, EstimatorError> {
    let forward_circuit = synth::synth_permutation(&cfg.params, cfg.strategy);
    let forward = forward_circuit.stats(&cfg.cost);
    let digest_width = cfg.digest_width.min(cfg.params.state_bits());

    let counts_base = match cfg.cost.counting_mode {
        CountingMode::Headline => {
            let oracle = if cfg.include_inverse {
                let spec = OracleSpec::new(cfg.params, cfg.strategy).with_inverse_pass(true);
                synth::synth_oracle(&spec)?.stats(&cfg.cost)
            } else {
                forward
            };
            let gpo = gates_per_oracle(&oracle, &cfg.cost);
            (forward_circuit.wire_count() as u64, oracle, None, gpo, gpo)
        }
        CountingMode::Exact => {
            let spec = OracleSpec::new(cfg.params, cfg.strategy)
                .with_target(random_target(digest_width, cfg.seed))
                .with_inverse_pass(true);
            let oracle_circuit = synth::synth_oracle(&spec)?;
            let oracle = oracle_circuit.stats(&cfg.cost);
            let diffusion = synth::synth_diffusion_proxy(cfg.params.state_bits())?.stats(&cfg.cost);
            (
                oracle_circuit.wire_count() as u64,
                oracle,
                Some(diffusion),
                gates_per_oracle(&oracle, &cfg.cost),
                gates_per_oracle(&diffusion, &cfg.cost),
            )
        }
    };
    let (logical_qubits, oracle, diffusion, gpo, diffusion_gates) = counts_base;

    let estimate = grover::estimate(&cfg.grover);
    let total = total_grover_gates(estimate.iterations, gpo, diffusion_gates, &cfg.cost);
    let counts = OracleCounts {
        logical_qubits,
        forward,
        oracle,
        diffusion,
        gates_per_oracle: gpo,
        diffusion_gates,
        total_2q_gates: total,
    };
    let summary = GroverSummary {
        params: cfg.grover,
        search_space: cfg.grover.search_space(),
        estimate,
        speedup: grover::speedup_summary(cfg.grover.log2_search_space()),
    };

    let mut inputs = json!({
        "lane_width": cfg.params.lane_width(),
        "rounds": cfg.params.rounds(),
        "round_offset": cfg.params.round_offset(),
        "strategy": cfg.strategy.as_str(),
        "include_inverse": cfg.include_inverse,
        "decomp_factor": cfg.cost.decomp_factor,
        "counting_mode": cfg.cost.counting_mode.as_str(),
        "log2_search_space": cfg.grover.log2_search_space(),
        "marked_count": cfg.grover.marked_count(),
    });
    if cfg.cost.counting_mode == CountingMode::Exact {
        inputs["digest_width"] = json!(digest_width);
        inputs["seed"] = json!(cfg.seed);
    }
    feasibility_report(inputs, counts, summary, &cfg.scenarios, &cfg.thresholds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::Timing;

    fn config(mode: CountingMode) -> PipelineConfig {
        PipelineConfig {
            params: KeccakParams::default(),
            strategy: SynthesisStrategy::Flat,
            include_inverse: false,
            cost: CostModel::new(10, mode).unwrap(),
            grover: GroverParams::default(),
            scenarios: vec![Scenario {
                name: "optimistic".into(),
                timing: Timing::GateTimeNs(50.0),
                physical_error_rate: 1e-3,
                logical_error_rate: 1e-6,
                qec_overhead: 1000,
            }],
            thresholds: Thresholds::default(),
            digest_width: DEFAULT_DIGEST_WIDTH,
            seed: 0,
        }
    }

    #[test]
    fn headline_counts() {
        let r = run_pipeline(&config(CountingMode::Headline)).unwrap();
        assert_eq!(r.counts.logical_qubits, 3200);
        assert_eq!(r.counts.gates_per_oracle, 96_000);
        let it = r.grover.estimate.iterations as f64;
        assert_eq!(r.counts.total_2q_gates, 2.0 * it * 96_000.0);
    }

    #[test]
    fn inverse_pass_doubles_headline_oracle() {
        let mut cfg = config(CountingMode::Headline);
        cfg.include_inverse = true;
        assert_eq!(run_pipeline(&cfg).unwrap().counts.gates_per_oracle, 192_000);
    }

    #[test]
    fn exact_counts_cover_the_whole_oracle() {
        let r = run_pipeline(&config(CountingMode::Exact)).unwrap();
        let o = r.counts.oracle;
        assert_eq!(o.toffoli_count, 2 * 9600 + 510);
        assert_eq!(r.counts.gates_per_oracle, o.cnot_count + 10 * o.toffoli_count);
        let d = r.counts.diffusion.unwrap();
        assert_eq!(d.toffoli_count, 2 * (1600 - 1));
        assert_eq!(r.counts.logical_qubits, 3200 + 255 + 1);
        assert!(r.inputs.get("seed").is_some());
    }

    #[test]
    fn targets_are_seeded() {
        assert_eq!(random_target(64, 9), random_target(64, 9));
        assert_ne!(random_target(64, 9), random_target(64, 10));
    }
}
