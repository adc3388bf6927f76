//! Reversible-circuit synthesis for r-round Keccak-f[25w] and its Grover oracle.
//!
//! Two strategies are provided:
//!
//! * [`SynthesisStrategy::Flat`] lays the 25·w state bits out as a 1D wire
//!   array and treats every consecutive group of five wires as a χ row. θ, ρ
//!   and π are replaced by one CNOT chain per round. Each state bit gets its
//!   own ancilla, computed and uncomputed in place, giving exactly
//!   `2 · 25w · r` Toffolis on `2 · 25w` wires. This is a counting model: it
//!   does not compute Keccak.
//! * [`SynthesisStrategy::Verified`] computes Keccak-f exactly. θ runs in
//!   place against a per-round column-parity block, ρ and π are pure wire
//!   relabelings, and χ is written out of place into a fresh register per
//!   round. The forward pass leaves those scratch registers dirty; the
//!   oracle's inverse pass cleans them.
//!
//! Wire layout always starts with the `state` register in flat-index order
//! (`w * (5y + x) + z`). After the forward pass, `state` holds the
//! permutation output under both strategies.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, RegisterMap, Wire};
use crate::keccak_ref::{self, flat_index, KeccakParams};

pub const STATE: &str = "state";
pub const ANCILLA: &str = "ancilla";
pub const THETA_PAR: &str = "theta_par";
pub const CMP_LADDER: &str = "cmp_ladder";
pub const RESULT: &str = "result";

pub fn round_out_name(k: usize) -> String {
    format!("round_out_{k}")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("chi gadget wires must be distinct, got {0:?}")]
    WireCollision([Wire; 4]),
    #[error("digest width {width} must be in 1..={max}")]
    DigestWidth { width: usize, max: usize },
    #[error("target has {target} bits but the comparator is {width} wide")]
    WidthMismatch { width: usize, target: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthesisStrategy {
    /// 1D counting model; see the module docs.
    #[default]
    #[serde(rename = "paper")]
    Flat,
    Verified,
}

impl SynthesisStrategy {
    pub fn as_str(self) -> &'static str {
        match self {
            SynthesisStrategy::Flat => "paper",
            SynthesisStrategy::Verified => "verified",
        }
    }
}

/// What [`synth_oracle`] builds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSpec {
    pub params: KeccakParams,
    pub strategy: SynthesisStrategy,
    /// Compared against the first `target_digest.len()` state wires.
    pub target_digest: Option<Vec<bool>>,
    pub include_inverse_pass: bool,
}

impl OracleSpec {
    pub fn new(params: KeccakParams, strategy: SynthesisStrategy) -> Self {
        Self {
            params,
            strategy,
            target_digest: None,
            include_inverse_pass: false,
        }
    }

    pub fn with_target(mut self, target: Vec<bool>) -> Self {
        self.target_digest = Some(target);
        self
    }

    pub fn with_inverse_pass(mut self, on: bool) -> Self {
        self.include_inverse_pass = on;
        self
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        if let Some(t) = &self.target_digest {
            let max = self.params.state_bits();
            if t.is_empty() || t.len() > max {
                return Err(SynthError::DigestWidth { width: t.len(), max });
            }
        }
        Ok(())
    }
}

/// Appends the in-place χ gadget for one bit:
/// `X(n1); CCX(n1, n2, a); CNOT(a, i); CCX(n1, n2, a); X(n1)`.
///
/// Leaves `bit ^= !n1 & n2` and restores `ancilla` to 0 (if it started at 0).
pub fn append_chi_bit(circuit: &mut Circuit, bit: Wire, n1: Wire, n2: Wire, ancilla: Wire) -> Result<(), SynthError> {
    let wires = [bit, n1, n2, ancilla];
    if (1..4).any(|i| wires[..i].contains(&wires[i])) {
        return Err(SynthError::WireCollision(wires));
    }
    circuit.push(Gate::x(n1))?;
    circuit.push(Gate::ccx(n1, n2, ancilla))?;
    circuit.push(Gate::cnot(ancilla, bit))?;
    circuit.push(Gate::ccx(n1, n2, ancilla))?;
    circuit.push(Gate::x(n1))?;
    Ok(())
}

/// Registers used by the forward permutation circuit.
pub fn permutation_registers(params: &KeccakParams, strategy: SynthesisStrategy) -> RegisterMap {
    let n = params.state_bits();
    let mut regs = RegisterMap::new();
    regs.add(STATE, n).expect("fresh map");
    match strategy {
        SynthesisStrategy::Flat => {
            regs.add(ANCILLA, n).expect("fresh name");
        }
        SynthesisStrategy::Verified => {
            regs.add(ANCILLA, 0).expect("fresh name");
            if params.rounds() > 0 {
                for k in 0..params.rounds() {
                    regs.add(&round_out_name(k), n).expect("fresh name");
                }
                regs.add(THETA_PAR, 5 * params.lane_width() as usize * params.rounds())
                    .expect("fresh name");
            }
        }
    }
    regs
}

pub fn synth_permutation(params: &KeccakParams, strategy: SynthesisStrategy) -> Circuit {
    let regs = permutation_registers(params, strategy);
    let mut c = Circuit::new(regs, permutation_label(params, strategy));
    emit_permutation(&mut c, params, strategy).expect("registers sized for the permutation");
    c
}

pub fn synth_permutation_flat(params: &KeccakParams) -> Circuit {
    synth_permutation(params, SynthesisStrategy::Flat)
}

pub fn synth_permutation_verified(params: &KeccakParams) -> Circuit {
    synth_permutation(params, SynthesisStrategy::Verified)
}

fn permutation_label(params: &KeccakParams, strategy: SynthesisStrategy) -> String {
    format!(
        "keccak-f[{}] rounds={} offset={} strategy={}",
        params.state_bits(),
        params.rounds(),
        params.round_offset(),
        strategy.as_str()
    )
}

fn emit_permutation(c: &mut Circuit, params: &KeccakParams, strategy: SynthesisStrategy) -> Result<(), SynthError> {
    match strategy {
        SynthesisStrategy::Flat => emit_flat(c, params),
        SynthesisStrategy::Verified => emit_verified(c, params),
    }
}

fn emit_flat(c: &mut Circuit, params: &KeccakParams) -> Result<(), SynthError> {
    let n = params.state_bits();
    let state = c.registers().require(STATE)?.offset;
    let anc = c.registers().require(ANCILLA)?.offset;
    for _ in params.round_indices() {
        // Stand-in linear layer; contributes no Toffolis.
        for j in 0..n {
            c.push(Gate::cnot(state + j, state + (j + 5) % n))?;
        }
        for j in 0..n {
            let (group, i) = (j / 5, j % 5);
            let n1 = state + 5 * group + (i + 1) % 5;
            let n2 = state + 5 * group + (i + 2) % 5;
            append_chi_bit(c, state + j, n1, n2, anc + j)?;
        }
    }
    Ok(())
}

fn emit_verified(c: &mut Circuit, params: &KeccakParams) -> Result<(), SynthError> {
    let w = params.lane_width();
    let wu = w as usize;
    let n = params.state_bits();
    let state = c.registers().require(STATE)?.wires();
    if params.rounds() == 0 {
        return Ok(());
    }
    let par_base = c.registers().require(THETA_PAR)?.offset;
    let at = |x: usize, y: usize, z: usize| flat_index(w, x, y, z);

    let mut cur: Vec<Wire> = state.clone().collect();
    for (k, round_index) in params.round_indices().enumerate() {
        // θ: column parities into this round's parity block, then D terms.
        let par = |x: usize, z: usize| par_base + 5 * wu * k + x * wu + z;
        for y in 0..5 {
            for x in 0..5 {
                for z in 0..wu {
                    c.push(Gate::cnot(cur[at(x, y, z)], par(x, z)))?;
                }
            }
        }
        for y in 0..5 {
            for x in 0..5 {
                for z in 0..wu {
                    let a = cur[at(x, y, z)];
                    c.push(Gate::cnot(par((x + 4) % 5, z), a))?;
                    c.push(Gate::cnot(par((x + 1) % 5, (z + wu - 1) % wu), a))?;
                }
            }
        }

        // ρ then π as a relabeling of wires.
        let mut b = vec![0; n];
        for y in 0..5 {
            for x in 0..5 {
                let r = keccak_ref::rho_offset(w, x, y) as usize;
                let (px, py) = (y, (2 * x + 3 * y) % 5);
                for z in 0..wu {
                    b[at(px, py, (z + r) % wu)] = cur[at(x, y, z)];
                }
            }
        }

        // χ out of place.
        let out = c.registers().require(&round_out_name(k))?.wires();
        let out: Vec<Wire> = out.collect();
        for y in 0..5 {
            for x in 0..5 {
                for z in 0..wu {
                    let o = out[at(x, y, z)];
                    let n1 = b[at((x + 1) % 5, y, z)];
                    let n2 = b[at((x + 2) % 5, y, z)];
                    c.push(Gate::cnot(b[at(x, y, z)], o))?;
                    c.push(Gate::x(n1))?;
                    c.push(Gate::ccx(n1, n2, o))?;
                    c.push(Gate::x(n1))?;
                }
            }
        }

        // ι
        let rc = keccak_ref::round_constant(w, round_index).expect("validated params");
        for z in 0..wu {
            if rc >> z & 1 == 1 {
                c.push(Gate::x(out[at(0, 0, z)]))?;
            }
        }
        cur = out;
    }

    // Bring the output back onto the state register.
    for (s, o) in state.zip(cur) {
        c.push(Gate::cnot(s, o))?;
        c.push(Gate::cnot(o, s))?;
        c.push(Gate::cnot(s, o))?;
    }
    Ok(())
}

/// Appends a bit-flip equality test: `result ^= (digest == target)`.
///
/// Uses an AND ladder of `m - 1` Toffolis into `ladder`, X-conjugated on
/// each pass, and uncomputes everything except `result`.
pub fn append_comparator(
    c: &mut Circuit,
    digest: &[Wire],
    target: &[bool],
    ladder: &[Wire],
    result: Wire,
) -> Result<(), SynthError> {
    let m = digest.len();
    if m == 0 {
        return Err(SynthError::DigestWidth { width: 0, max: 0 });
    }
    if target.len() != m {
        return Err(SynthError::WidthMismatch {
            width: m,
            target: target.len(),
        });
    }
    assert_eq!(ladder.len(), m - 1, "ladder must have m - 1 wires");

    let flip_zeros = |c: &mut Circuit| -> Result<(), SynthError> {
        for (&d, &t) in digest.iter().zip(target) {
            if !t {
                c.push(Gate::x(d))?;
            }
        }
        Ok(())
    };

    if m == 1 {
        flip_zeros(c)?;
        c.push(Gate::cnot(digest[0], result))?;
        flip_zeros(c)?;
        return Ok(());
    }

    let mut chain = Vec::with_capacity(m - 1);
    chain.push(Gate::ccx(digest[0], digest[1], ladder[0]));
    for i in 1..m - 1 {
        chain.push(Gate::ccx(ladder[i - 1], digest[i + 1], ladder[i]));
    }

    flip_zeros(c)?;
    for &g in &chain {
        c.push(g)?;
    }
    flip_zeros(c)?;
    c.push(Gate::cnot(ladder[m - 2], result))?;
    flip_zeros(c)?;
    for &g in chain.iter().rev() {
        c.push(g)?;
    }
    flip_zeros(c)?;
    Ok(())
}

fn comparator_registers(regs: &mut RegisterMap, m: usize) -> (Range<Wire>, Wire) {
    let ladder = regs.add(CMP_LADDER, m.saturating_sub(1)).expect("fresh name");
    let result = regs.add(RESULT, 1).expect("fresh name").start;
    (ladder, result)
}

/// Standalone comparator on an `m`-wire `state` register.
pub fn synth_comparator(m: usize, target: &[bool]) -> Result<Circuit, SynthError> {
    if m == 0 {
        return Err(SynthError::DigestWidth { width: 0, max: 0 });
    }
    if target.len() != m {
        return Err(SynthError::WidthMismatch {
            width: m,
            target: target.len(),
        });
    }
    let mut regs = RegisterMap::new();
    let digest: Vec<Wire> = regs.add(STATE, m)?.collect();
    let (ladder, result) = comparator_registers(&mut regs, m);
    let mut c = Circuit::new(regs, format!("comparator m={m}"));
    append_comparator(&mut c, &digest, target, &ladder.collect::<Vec<_>>(), result)?;
    Ok(c)
}

/// Equality-with-zero over `n` wires: the multi-controlled core of the Grover
/// diffusion step, used as its gate-count proxy. Hadamard layers are not
/// representable in the IR and carry no two-qubit cost.
pub fn synth_diffusion_proxy(n: usize) -> Result<Circuit, SynthError> {
    let mut c = synth_comparator(n, &vec![false; n])?;
    c.set_label(format!("diffusion proxy n={n}"));
    Ok(c)
}

/// Forward permutation, optional comparator, optional inverse pass.
///
/// With a target and the inverse pass, simulation from a clean basis state
/// restores every wire except `result`, which flips iff the first `m` output
/// bits equal the target.
pub fn synth_oracle(spec: &OracleSpec) -> Result<Circuit, SynthError> {
    spec.validate()?;
    let mut regs = permutation_registers(&spec.params, spec.strategy);
    let cmp = spec
        .target_digest
        .as_ref()
        .map(|t| comparator_registers(&mut regs, t.len()));

    let mut label = permutation_label(&spec.params, spec.strategy);
    if let Some(t) = &spec.target_digest {
        label.push_str(&format!(" digest={}", t.len()));
    }
    if spec.include_inverse_pass {
        label.push_str(" inverse");
    }
    let mut c = Circuit::new(regs, label);
    emit_permutation(&mut c, &spec.params, spec.strategy)?;
    let forward: Vec<Gate> = c.gates().to_vec();

    if let (Some(target), Some((ladder, result))) = (&spec.target_digest, cmp) {
        let state = c.registers().require(STATE)?.offset;
        let digest: Vec<Wire> = (state..state + target.len()).collect();
        append_comparator(&mut c, &digest, target, &ladder.collect::<Vec<_>>(), result)?;
    }
    if spec.include_inverse_pass {
        for &g in forward.iter().rev() {
            c.push(g)?;
        }
    }
    Ok(c)
}
