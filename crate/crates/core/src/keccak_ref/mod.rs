//! Classical reference implementation of Keccak-f[25w].
//!
//! Supports lane widths `w ∈ {1, 2, 4, 8, 16, 32, 64}` and any contiguous
//! range of rounds. This is the ground truth every synthesized circuit is
//! checked against.
//!
//! # Bit addressing
//!
//! The state is a 5×5 array of `w`-bit lanes. Bit `(x, y, z)` has the flat
//! index `w * (5*y + x) + z`, which is also its wire index in the `state`
//! register of a synthesized circuit and its position in the hex encoding.

mod consts;
mod inverse;

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::hexbits::{self, HexError};

pub use consts::{MAX_ROUNDS, RHO_OFFSETS, ROUND_CONSTANTS};
pub use inverse::{chi_inverse, inverse_permute, inverse_round, pi_inverse, rho_inverse, theta_inverse};

pub const LANE_WIDTHS: [u32; 7] = [1, 2, 4, 8, 16, 32, 64];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeccakError {
    #[error("lane width {0} is not one of 1, 2, 4, 8, 16, 32, 64")]
    LaneWidth(u32),
    #[error("rounds ({rounds}) + round offset ({offset}) exceeds {MAX_ROUNDS}")]
    RoundRange { rounds: usize, offset: usize },
    #[error("round index {0} is out of range 0..{MAX_ROUNDS}")]
    RoundIndex(usize),
    #[error("expected {expected} state bits, got {actual}")]
    StateLength { expected: usize, actual: usize },
    #[error(transparent)]
    Hex(#[from] HexError),
}

/// Lane width, number of rounds, and index of the first round constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct KeccakParams {
    lane_width: u32,
    rounds: usize,
    round_offset: usize,
}

impl KeccakParams {
    pub fn new(lane_width: u32, rounds: usize, round_offset: usize) -> Result<Self, KeccakError> {
        check_lane_width(lane_width)?;
        if rounds + round_offset > MAX_ROUNDS {
            return Err(KeccakError::RoundRange {
                rounds,
                offset: round_offset,
            });
        }
        Ok(Self {
            lane_width,
            rounds,
            round_offset,
        })
    }

    pub fn lane_width(&self) -> u32 {
        self.lane_width
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn round_offset(&self) -> usize {
        self.round_offset
    }

    /// Number of state bits, `25 * w`.
    pub fn state_bits(&self) -> usize {
        25 * self.lane_width as usize
    }

    /// Round-constant indices applied by [`permute`], in order.
    pub fn round_indices(&self) -> std::ops::Range<usize> {
        self.round_offset..self.round_offset + self.rounds
    }
}

impl Default for KeccakParams {
    /// Keccak-f[1600], three rounds starting at round constant 0.
    fn default() -> Self {
        Self {
            lane_width: 64,
            rounds: 3,
            round_offset: 0,
        }
    }
}

fn check_lane_width(w: u32) -> Result<(), KeccakError> {
    if LANE_WIDTHS.contains(&w) {
        Ok(())
    } else {
        Err(KeccakError::LaneWidth(w))
    }
}

#[inline]
pub(crate) fn lane_index(x: usize, y: usize) -> usize {
    x + 5 * y
}

/// Flat bit index of `(x, y, z)` for lane width `w`.
#[inline]
pub fn flat_index(w: u32, x: usize, y: usize, z: usize) -> usize {
    w as usize * lane_index(x, y) + z
}

/// Inverse of [`flat_index`].
#[inline]
pub fn coords(w: u32, flat: usize) -> (usize, usize, usize) {
    let w = w as usize;
    let lane = flat / w;
    (lane % 5, lane / 5, flat % w)
}

/// The 25·w-bit permutation state, stored as 25 lanes masked to `w` bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeccakState {
    lane_width: u32,
    lanes: [u64; 25],
}

impl KeccakState {
    pub fn zero(lane_width: u32) -> Result<Self, KeccakError> {
        check_lane_width(lane_width)?;
        Ok(Self {
            lane_width,
            lanes: [0; 25],
        })
    }

    /// Builds a state from lanes in `x + 5*y` order; bits above `w` are dropped.
    pub fn from_lanes(lane_width: u32, lanes: [u64; 25]) -> Result<Self, KeccakError> {
        let mut s = Self::zero(lane_width)?;
        let mask = s.mask();
        for (dst, src) in s.lanes.iter_mut().zip(lanes) {
            *dst = src & mask;
        }
        Ok(s)
    }

    pub fn from_bits(lane_width: u32, bits: &[bool]) -> Result<Self, KeccakError> {
        let mut s = Self::zero(lane_width)?;
        if bits.len() != s.len() {
            return Err(KeccakError::StateLength {
                expected: s.len(),
                actual: bits.len(),
            });
        }
        for (i, &b) in bits.iter().enumerate() {
            s.set_bit(i, b);
        }
        Ok(s)
    }

    pub fn random<R: Rng + ?Sized>(lane_width: u32, rng: &mut R) -> Result<Self, KeccakError> {
        let mut lanes = [0u64; 25];
        rng.fill(&mut lanes[..]);
        Self::from_lanes(lane_width, lanes)
    }

    pub fn from_hex(lane_width: u32, s: &str) -> Result<Self, KeccakError> {
        let bits = 25 * lane_width as usize;
        check_lane_width(lane_width)?;
        let words = hexbits::decode(s, bits)?;
        let mut state = Self::zero(lane_width)?;
        for i in 0..bits {
            if words[i / 64] >> (i % 64) & 1 == 1 {
                state.set_bit(i, true);
            }
        }
        Ok(state)
    }

    pub fn to_hex(&self) -> String {
        hexbits::encode(self.len(), |i| self.bit(i))
    }

    pub fn lane_width(&self) -> u32 {
        self.lane_width
    }

    /// Always `25 * lane_width`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        25 * self.lane_width as usize
    }

    pub fn lanes(&self) -> &[u64; 25] {
        &self.lanes
    }

    pub fn lane(&self, x: usize, y: usize) -> u64 {
        self.lanes[lane_index(x, y)]
    }

    pub fn set_lane(&mut self, x: usize, y: usize, value: u64) {
        self.lanes[lane_index(x, y)] = value & self.mask();
    }

    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.lane(x, y) >> z & 1 == 1
    }

    pub fn set(&mut self, x: usize, y: usize, z: usize, value: bool) {
        let lane = &mut self.lanes[lane_index(x, y)];
        *lane = (*lane & !(1 << z)) | ((value as u64) << z);
    }

    pub fn bit(&self, flat: usize) -> bool {
        let (x, y, z) = coords(self.lane_width, flat);
        self.get(x, y, z)
    }

    pub fn set_bit(&mut self, flat: usize, value: bool) {
        let (x, y, z) = coords(self.lane_width, flat);
        self.set(x, y, z, value);
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.lanes.iter().map(|l| l.count_ones()).sum()
    }

    pub(crate) fn mask(&self) -> u64 {
        lane_mask(self.lane_width)
    }

    pub(crate) fn rotl(&self, v: u64, n: u32) -> u64 {
        rotl_lane(v, n, self.lane_width)
    }
}

impl std::ops::BitXor for KeccakState {
    type Output = KeccakState;

    fn bitxor(mut self, rhs: Self) -> Self {
        assert_eq!(self.lane_width, rhs.lane_width, "lane width mismatch");
        for (a, b) in self.lanes.iter_mut().zip(rhs.lanes) {
            *a ^= b;
        }
        self
    }
}

impl fmt::Debug for KeccakState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KeccakState(w={}, {})", self.lane_width, self.to_hex())
    }
}

pub(crate) fn lane_mask(w: u32) -> u64 {
    if w == 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

/// `w` is a power of two, so the shift reduces with a mask.
pub(crate) fn rotl_lane(v: u64, n: u32, w: u32) -> u64 {
    debug_assert!(w.is_power_of_two());
    let n = n & (w - 1);
    if n == 0 {
        v
    } else {
        ((v << n) | (v >> (w - n))) & lane_mask(w)
    }
}

/// ρ offset for lane `(x, y)` reduced mod `w`.
pub fn rho_offset(w: u32, x: usize, y: usize) -> u32 {
    RHO_OFFSETS[lane_index(x, y)] % w
}

/// Round constant `round_index` truncated to the low `w` bits.
pub fn round_constant(w: u32, round_index: usize) -> Result<u64, KeccakError> {
    ROUND_CONSTANTS
        .get(round_index)
        .map(|rc| rc & lane_mask(w))
        .ok_or(KeccakError::RoundIndex(round_index))
}

fn column_parities(s: &KeccakState) -> [u64; 5] {
    let mut c = [0u64; 5];
    for (x, cx) in c.iter_mut().enumerate() {
        *cx = (0..5).fold(0, |acc, y| acc ^ s.lane(x, y));
    }
    c
}

pub fn theta(state: &KeccakState) -> KeccakState {
    let c = column_parities(state);
    let mut out = *state;
    for x in 0..5 {
        let d = c[(x + 4) % 5] ^ state.rotl(c[(x + 1) % 5], 1);
        for y in 0..5 {
            out.lanes[lane_index(x, y)] ^= d;
        }
    }
    out
}

pub fn rho(state: &KeccakState) -> KeccakState {
    let mut out = *state;
    for (i, lane) in out.lanes.iter_mut().enumerate() {
        *lane = state.rotl(*lane, RHO_OFFSETS[i]);
    }
    out
}

/// Lane `(x, y)` moves to `(y, 2x + 3y mod 5)`.
pub fn pi(state: &KeccakState) -> KeccakState {
    let mut out = *state;
    for x in 0..5 {
        for y in 0..5 {
            out.lanes[lane_index(y, (2 * x + 3 * y) % 5)] = state.lane(x, y);
        }
    }
    out
}

/// `out[i] = in[i] ^ (!in[i+1] & in[i+2])`, indices mod 5.
pub fn chi_row(row: [bool; 5]) -> [bool; 5] {
    std::array::from_fn(|i| row[i] ^ (!row[(i + 1) % 5] & row[(i + 2) % 5]))
}

pub fn chi(state: &KeccakState) -> KeccakState {
    let mask = state.mask();
    let mut out = *state;
    for y in 0..5 {
        for x in 0..5 {
            let a1 = state.lane((x + 1) % 5, y);
            let a2 = state.lane((x + 2) % 5, y);
            out.lanes[lane_index(x, y)] = state.lane(x, y) ^ (!a1 & a2 & mask);
        }
    }
    out
}

pub fn iota(state: &KeccakState, round_index: usize) -> Result<KeccakState, KeccakError> {
    let mut out = *state;
    out.lanes[0] ^= round_constant(state.lane_width, round_index)?;
    Ok(out)
}

/// One round `ι ∘ χ ∘ π ∘ ρ ∘ θ` with round constant `round_index`.
pub fn round(state: &KeccakState, round_index: usize) -> Result<KeccakState, KeccakError> {
    let rc = round_constant(state.lane_width, round_index)?;
    let (w, mask) = (state.lane_width, state.mask());
    let a = &state.lanes;
    let c: [u64; 5] = std::array::from_fn(|x| a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20]);
    let d: [u64; 5] = std::array::from_fn(|x| c[(x + 4) % 5] ^ rotl_lane(c[(x + 1) % 5], 1, w));
    let mut b = [0u64; 25];
    for y in 0..5 {
        for x in 0..5 {
            let i = x + 5 * y;
            b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl_lane(a[i] ^ d[x], RHO_OFFSETS[i], w);
        }
    }
    let mut lanes = [0u64; 25];
    for y in 0..5 {
        for x in 0..5 {
            let r = 5 * y;
            lanes[r + x] = b[r + x] ^ (!b[r + (x + 1) % 5] & b[r + (x + 2) % 5] & mask);
        }
    }
    lanes[0] ^= rc;
    Ok(KeccakState { lane_width: w, lanes })
}

/// Applies rounds `round_offset .. round_offset + rounds`.
pub fn permute(state: &KeccakState, params: &KeccakParams) -> Result<KeccakState, KeccakError> {
    if state.lane_width != params.lane_width {
        return Err(KeccakError::StateLength {
            expected: params.state_bits(),
            actual: state.len(),
        });
    }
    params.round_indices().try_fold(*state, |s, idx| round(&s, idx))
}
