//! Exact simulation of {X, CNOT, CCX} circuits on computational basis states.
//!
//! [`run`] simulates one packed [`BasisState`]. The checks in [`check`] use a
//! bit-sliced engine instead: one `u64` per wire carries 64 independent
//! basis states, so every gate costs a single word operation per batch.
//! Phases are not tracked.

pub mod check;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, GateKind};
use crate::hexbits::{self, HexError};
use crate::keccak_ref::{self, KeccakParams, KeccakState};

pub use check::{check_ancilla_clean, check_equivalence, check_reversibility, CheckReport, Sampling};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("state has {actual} bits but the circuit has {expected} wires")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("exhaustive checking supports at most {max} input bits, register has {width}")]
    ExhaustiveTooWide { width: usize, max: usize },
    #[error("trial count must be positive")]
    NoTrials,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Hex(#[from] HexError),
}

/// A packed bit vector, one bit per wire.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasisState {
    len: usize,
    words: Vec<u64>,
}

impl BasisState {
    pub fn zero(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            s.set(i, b);
        }
        s
    }

    /// Low `len` bits of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut s = Self::zero(len);
        if len > 0 {
            s.words[0] = if len >= 64 { value } else { value & ((1 << len) - 1) };
        }
        s
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut s = Self::zero(len);
        rng.fill(&mut s.words[..]);
        s.clear_padding();
        s
    }

    pub fn from_hex(len: usize, hex: &str) -> Result<Self, SimError> {
        Ok(Self {
            len,
            words: hexbits::decode(hex, len)?,
        })
    }

    pub fn to_hex(&self) -> String {
        hexbits::encode(self.len, |i| self.get(i))
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / 64];
        *w = (*w & !(1 << (i % 64))) | ((v as u64) << (i % 64));
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// `len <= 64` bits starting at `offset`, the first in bit 0.
    pub fn bits(&self, offset: usize, len: usize) -> u64 {
        assert!(len <= 64 && offset + len <= self.len);
        if len == 0 {
            return 0;
        }
        let (i, sh) = (offset / 64, offset % 64);
        let mut v = self.words[i] >> sh;
        if sh + len > 64 {
            v |= self.words[i + 1] << (64 - sh);
        }
        v & mask(len)
    }

    /// Overwrites `len <= 64` bits starting at `offset` with the low bits of `value`.
    pub fn set_bits(&mut self, offset: usize, len: usize, value: u64) {
        assert!(len <= 64 && offset + len <= self.len);
        if len == 0 {
            return;
        }
        let value = value & mask(len);
        let (i, sh) = (offset / 64, offset % 64);
        self.words[i] = (self.words[i] & !(mask(len) << sh)) | (value << sh);
        if sh + len > 64 {
            let hi = sh + len - 64;
            self.words[i + 1] = (self.words[i + 1] & !mask(hi)) | (value >> (64 - sh));
        }
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Bits `range` as a new state.
    pub fn slice(&self, range: std::ops::Range<usize>) -> BasisState {
        let mut out = BasisState::zero(range.len());
        for (j, i) in range.enumerate() {
            out.set(j, self.get(i));
        }
        out
    }

    /// Overwrites bits starting at `offset` with `src`.
    pub fn write(&mut self, offset: usize, src: &BasisState) {
        for j in 0..src.len {
            self.set(offset + j, src.get(j));
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn clear_padding(&mut self) {
        if !self.len.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1 << (self.len % 64)) - 1;
            }
        }
    }
}

impl std::ops::BitXor for &BasisState {
    type Output = BasisState;

    fn bitxor(self, rhs: &BasisState) -> BasisState {
        assert_eq!(self.len, rhs.len);
        BasisState {
            len: self.len,
            words: self.words.iter().zip(&rhs.words).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Debug for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasisState({} bits, {})", self.len, self.to_hex())
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1 << len) - 1
    }
}

/// Applies the gates of `circuit` to `input` in order.
pub fn run(circuit: &Circuit, input: &BasisState) -> Result<BasisState, SimError> {
    if input.len != circuit.wire_count() {
        return Err(SimError::WidthMismatch {
            expected: circuit.wire_count(),
            actual: input.len,
        });
    }
    let mut s = input.clone();
    for g in circuit.gates() {
        let fire = match g.kind() {
            GateKind::X => true,
            GateKind::Cnot => s.get(g.controls()[0]),
            GateKind::Ccx => s.get(g.controls()[0]) && s.get(g.controls()[1]),
        };
        if fire {
            s.flip(g.target());
        }
    }
    Ok(s)
}

/// Runs 64 basis states at once; `lanes[w]` bit `l` is wire `w` of state `l`.
pub fn run_sliced(circuit: &Circuit, lanes: &mut [u64]) -> Result<(), SimError> {
    if lanes.len() != circuit.wire_count() {
        return Err(SimError::WidthMismatch {
            expected: circuit.wire_count(),
            actual: lanes.len(),
        });
    }
    for g in circuit.gates() {
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
    Ok(())
}

/// Extracts lane `lane` of `words` (one word per bit) as a basis state.
pub fn lane_state(words: &[u64], lane: usize) -> BasisState {
    BasisState {
        len: words.len(),
        words: words
            .chunks(64)
            .map(|c| c.iter().enumerate().fold(0, |acc, (j, w)| acc | (w >> lane & 1) << j))
            .collect(),
    }
}

/// Writes `state` into lane `lane` of `words`.
pub fn set_lane(words: &mut [u64], lane: usize, state: &BasisState) {
    assert_eq!(words.len(), state.len());
    for (chunk, &bits) in words.chunks_mut(64).zip(&state.words) {
        for (j, w) in chunk.iter_mut().enumerate() {
            *w = (*w & !(1 << lane)) | ((bits >> j & 1) << lane);
        }
    }
}

/// `keccak_ref::permute` lifted to basis states of `params.state_bits()` bits.
pub fn keccak_reference(params: KeccakParams) -> impl Fn(&BasisState) -> BasisState + Sync {
    move |s: &BasisState| {
        let w = params.lane_width() as usize;
        let lanes = std::array::from_fn(|i| s.bits(w * i, w));
        let ks = KeccakState::from_lanes(params.lane_width(), lanes).expect("valid params");
        let out = keccak_ref::permute(&ks, &params).expect("width matches");
        let mut r = BasisState::zero(s.len());
        for (i, &lane) in out.lanes().iter().enumerate() {
            r.set_bits(w * i, w, lane);
        }
        r
    }
}
