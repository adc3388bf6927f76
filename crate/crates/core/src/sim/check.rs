//! Randomized and exhaustive circuit checks with reproducible counterexamples.
//!
//! Inputs are drawn in batches of 64 from a ChaCha8 stream keyed by the
//! seed and batch index, so a report's seed replays the same inputs no
//! matter how batches are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{lane_state, run_sliced, set_lane, BasisState, SimError};
use crate::circuit::{Circuit, GateKind};

/// Widest register [`Sampling::Exhaustive`] will enumerate.
pub const MAX_EXHAUSTIVE_BITS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    Random {
        trials: usize,
        seed: u64,
    },
    /// Every assignment of the input register.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub pass: bool,
    pub trials: u64,
    pub seed: Option<u64>,
    /// Hex-encoded violating input, over all circuit wires.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckReport {
    fn new(trials: u64, seed: Option<u64>, counterexample: Option<BasisState>) -> Self {
        Self {
            pass: counterexample.is_none(),
            trials,
            seed,
            counterexample: counterexample.map(|s| s.to_hex()),
        }
    }
}

fn lane_mask(active: usize) -> u64 {
    if active >= 64 {
        u64::MAX
    } else {
        (1 << active) - 1
    }
}

fn batch_count(trials: usize) -> usize {
    trials.div_ceil(64)
}

fn active_lanes(trials: usize, batch: usize) -> usize {
    (trials - 64 * batch).min(64)
}

/// Random words on every wire not marked `zeroed`.
fn random_batch(zeroed: &[bool], seed: u64, batch: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch as u64);
    zeroed.iter().map(|&z| if z { 0 } else { rng.random() }).collect()
}

fn zero_mask(circuit: &Circuit, names: &[&str]) -> Result<Vec<bool>, SimError> {
    let mut zeroed = vec![false; circuit.wire_count()];
    for name in names {
        for w in circuit.registers().require(name)?.wires() {
            zeroed[w] = true;
        }
    }
    Ok(zeroed)
}

fn run_sliced_reverse(circuit: &Circuit, lanes: &mut [u64]) {
    for g in circuit.gates().iter().rev() {
        let t = g.target();
        match g.kind() {
            GateKind::X => lanes[t] = !lanes[t],
            GateKind::Cnot => lanes[t] ^= lanes[g.controls()[0]],
            GateKind::Ccx => {
                let c = g.controls();
                lanes[t] ^= lanes[c[0]] & lanes[c[1]];
            }
        }
    }
}

/// True iff the named registers, started at 0 with every other wire random,
/// end at 0 on every sampled input.
pub fn check_ancilla_clean(
    circuit: &Circuit,
    register_names: &[&str],
    trials: usize,
    seed: u64,
) -> Result<CheckReport, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let zeroed = zero_mask(circuit, register_names)?;
    let watched: Vec<usize> = (0..zeroed.len()).filter(|&w| zeroed[w]).collect();
    let failure = (0..batch_count(trials)).into_par_iter().find_map_first(|b| {
        let input = random_batch(&zeroed, seed, b);
        let mut lanes = input.clone();
        run_sliced(circuit, &mut lanes).expect("width checked");
        let dirty = watched.iter().fold(0, |acc, &w| acc | lanes[w]) & lane_mask(active_lanes(trials, b));
        (dirty != 0).then(|| lane_state(&input, dirty.trailing_zeros() as usize))
    });
    Ok(CheckReport::new(trials as u64, Some(seed), failure))
}

/// True iff running `circuit` then its inverse returns every sampled input,
/// all wires random.
pub fn check_reversibility(circuit: &Circuit, trials: usize, seed: u64) -> Result<CheckReport, SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let zeroed = vec![false; circuit.wire_count()];
    let failure = (0..batch_count(trials)).into_par_iter().find_map_first(|b| {
        let input = random_batch(&zeroed, seed, b);
        let mut lanes = input.clone();
        run_sliced(circuit, &mut lanes).expect("width checked");
        run_sliced_reverse(circuit, &mut lanes);
        let diff = input.iter().zip(&lanes).fold(0, |acc, (a, b)| acc | (a ^ b)) & lane_mask(active_lanes(trials, b));
        (diff != 0).then(|| lane_state(&input, diff.trailing_zeros() as usize))
    });
    Ok(CheckReport::new(trials as u64, Some(seed), failure))
}

/// True iff the circuit's action on `state_register` (all other wires
/// starting at 0) matches `reference` on every sampled input.
pub fn check_equivalence<F>(
    circuit: &Circuit,
    reference: F,
    state_register: &str,
    sampling: Sampling,
) -> Result<CheckReport, SimError>
where
    F: Fn(&BasisState) -> BasisState + Sync,
{
    let reg = circuit.registers().require(state_register)?.clone();
    let n_wires = circuit.wire_count();
    let mut zeroed = vec![true; n_wires];
    for w in reg.wires() {
        zeroed[w] = false;
    }

    let (trials, seed) = match sampling {
        Sampling::Random { trials: 0, .. } => return Err(SimError::NoTrials),
        Sampling::Random { trials, seed } => (trials, Some(seed)),
        Sampling::Exhaustive => {
            if reg.width > MAX_EXHAUSTIVE_BITS {
                return Err(SimError::ExhaustiveTooWide {
                    width: reg.width,
                    max: MAX_EXHAUSTIVE_BITS,
                });
            }
            (1usize << reg.width, None)
        }
    };

    let make_input = |b: usize| -> Vec<u64> {
        match seed {
            Some(seed) => random_batch(&zeroed, seed, b),
            None => {
                // Lane l of batch b encodes the integer 64b + l.
                let mut words = vec![0u64; n_wires];
                for (j, w) in reg.wires().enumerate() {
                    words[w] = if j < 6 {
                        (0..64).fold(0u64, |acc, l| acc | (((l >> j) & 1) as u64) << l)
                    } else if (b >> (j - 6)) & 1 == 1 {
                        u64::MAX
                    } else {
                        0
                    };
                }
                words
            }
        }
    };

    let failure = (0..batch_count(trials)).into_par_iter().find_map_first(|b| {
        let input = make_input(b);
        let mut lanes = input.clone();
        run_sliced(circuit, &mut lanes).expect("width checked");
        let active = active_lanes(trials, b);

        let reg_in = &input[reg.wires()];
        let mut expected = vec![0u64; reg.width];
        for l in 0..active {
            let out = reference(&lane_state(reg_in, l));
            assert_eq!(out.len(), reg.width, "reference output width");
            set_lane(&mut expected, l, &out);
        }
        let diff = lanes[reg.wires()]
            .iter()
            .zip(&expected)
            .fold(0, |acc, (a, b)| acc | (a ^ b))
            & lane_mask(active);
        (diff != 0).then(|| lane_state(&input, diff.trailing_zeros() as usize))
    });
    Ok(CheckReport::new(trials as u64, seed, failure))
}
