//! Closed-form Grover search arithmetic and a small dense statevector
//! simulator that checks it.

use std::f64::consts::FRAC_PI_4;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest search register [`GroverSimulator`] will allocate.
pub const MAX_SIM_QUBITS: u32 = 20;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroverError {
    #[error("log2 search space must be finite and non-negative, got {0}")]
    SearchSpace(f64),
    #[error("marked count {marked} must lie in [1, N] (N = 2^{log2_n})")]
    MarkedCount { marked: u64, log2_n: f64 },
    #[error("simulator supports at most {max} qubits, got {n}")]
    TooManyQubits { n: u32, max: u32 },
    #[error("no marked states")]
    NothingMarked,
    #[error("amplitude norm drifted to {0}")]
    Normalization(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverParams {
    log2_search_space: f64,
    marked_count: u64,
}

impl GroverParams {
    pub fn new(log2_search_space: f64, marked_count: u64) -> Result<Self, GroverError> {
        if !log2_search_space.is_finite() || log2_search_space < 0.0 {
            return Err(GroverError::SearchSpace(log2_search_space));
        }
        if marked_count == 0 || (marked_count as f64).log2() > log2_search_space {
            return Err(GroverError::MarkedCount {
                marked: marked_count,
                log2_n: log2_search_space,
            });
        }
        Ok(Self {
            log2_search_space,
            marked_count,
        })
    }

    pub fn log2_search_space(&self) -> f64 {
        self.log2_search_space
    }

    pub fn marked_count(&self) -> u64 {
        self.marked_count
    }

    pub fn search_space(&self) -> f64 {
        self.log2_search_space.exp2()
    }

    pub fn sqrt_search_space(&self) -> f64 {
        (self.log2_search_space / 2.0).exp2()
    }

    /// sin of the rotation half-angle, √(M/N).
    fn amplitude(&self) -> f64 {
        (((self.marked_count as f64).log2() - self.log2_search_space) / 2.0).exp2()
    }
}

impl Default for GroverParams {
    fn default() -> Self {
        Self {
            log2_search_space: 57.8,
            marked_count: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverEstimate {
    pub sqrt_n: f64,
    pub iterations: u64,
    pub success_probability: f64,
}

/// ⌊(π/4)·√(N/M)⌋.
pub fn iterations(params: &GroverParams) -> u64 {
    (FRAC_PI_4 / params.amplitude()).floor() as u64
}

/// sin²((2k+1)·arcsin √(M/N)).
pub fn success_probability(params: &GroverParams, k: u64) -> f64 {
    let theta = params.amplitude().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2).clamp(0.0, 1.0)
}

pub fn estimate(params: &GroverParams) -> GroverEstimate {
    let iterations = iterations(params);
    GroverEstimate {
        sqrt_n: params.sqrt_search_space(),
        iterations,
        success_probability: success_probability(params, iterations),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Speedup {
    pub classical_log2: f64,
    pub quantum_log2: f64,
    pub classical: f64,
    pub quantum: f64,
}

pub fn speedup_summary(classical_log2: f64) -> Speedup {
    let quantum_log2 = classical_log2 / 2.0;
    Speedup {
        classical_log2,
        quantum_log2,
        classical: classical_log2.exp2(),
        quantum: quantum_log2.exp2(),
    }
}

/// Real amplitudes over `2^n` basis states; Grover's operators never leave
/// the reals when started from the uniform superposition.
#[derive(Debug, Clone)]
pub struct GroverSimulator {
    amps: Vec<f64>,
    marked: Vec<bool>,
}

impl GroverSimulator {
    pub fn new(n_qubits: u32, marked: impl Fn(u64) -> bool) -> Result<Self, GroverError> {
        if n_qubits > MAX_SIM_QUBITS {
            return Err(GroverError::TooManyQubits {
                n: n_qubits,
                max: MAX_SIM_QUBITS,
            });
        }
        let size = 1usize << n_qubits;
        let marked: Vec<bool> = (0..size as u64).map(marked).collect();
        if !marked.contains(&true) {
            return Err(GroverError::NothingMarked);
        }
        Ok(Self {
            amps: vec![(size as f64).sqrt().recip(); size],
            marked,
        })
    }

    /// One oracle phase flip followed by inversion about the mean.
    pub fn step(&mut self) -> Result<(), GroverError> {
        self.amps.par_iter_mut().zip(&self.marked).for_each(|(a, &m)| {
            if m {
                *a = -*a;
            }
        });
        let mean = self.amps.par_iter().sum::<f64>() / self.amps.len() as f64;
        self.amps.par_iter_mut().for_each(|a| *a = 2.0 * mean - *a);
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(GroverError::Normalization(norm));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.par_iter().map(|a| a * a).sum()
    }

    /// Probability mass on the marked set.
    pub fn success_probability(&self) -> f64 {
        self.amps
            .par_iter()
            .zip(&self.marked)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a * a)
            .sum()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }
}

/// Success probability after `k` iterations on `n_qubits`.
pub fn grover_simulate(n_qubits: u32, marked: impl Fn(u64) -> bool, k: u64) -> Result<f64, GroverError> {
    let mut sim = GroverSimulator::new(n_qubits, marked)?;
    for _ in 0..k {
        sim.step()?;
    }
    Ok(sim.success_probability())
}
