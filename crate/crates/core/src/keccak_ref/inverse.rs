//! Inverse round, used to witness that the forward permutation is a bijection.

use std::sync::OnceLock;

use super::{chi_row, iota, lane_index, rotl_lane, KeccakError, KeccakParams, KeccakState, LANE_WIDTHS, RHO_OFFSETS};

/// Column-parity plane, 5w bits packed as `x * w + z`.
type Plane = [u64; 5];

fn plane_get(p: &Plane, i: usize) -> bool {
    p[i / 64] >> (i % 64) & 1 == 1
}

fn plane_flip(p: &mut Plane, i: usize) {
    p[i / 64] ^= 1 << (i % 64);
}

fn lanes_to_plane(w: u32, lanes: &[u64; 5]) -> Plane {
    let mut p = [0; 5];
    for (x, &lane) in lanes.iter().enumerate() {
        for z in 0..w as usize {
            if lane >> z & 1 == 1 {
                plane_flip(&mut p, x * w as usize + z);
            }
        }
    }
    p
}

fn plane_to_lanes(w: u32, p: &Plane) -> [u64; 5] {
    let mut lanes = [0; 5];
    for (x, lane) in lanes.iter_mut().enumerate() {
        for z in 0..w as usize {
            if plane_get(p, x * w as usize + z) {
                *lane |= 1 << z;
            }
        }
    }
    lanes
}

/// `D[x] = C[x-1] ^ rotl(C[x+1], 1)`.
fn theta_d(w: u32, c: &[u64; 5]) -> [u64; 5] {
    std::array::from_fn(|x| c[(x + 4) % 5] ^ rotl_lane(c[(x + 1) % 5], 1, w))
}

/// Rows of `(I + M)^-1`, where θ maps the column-parity plane `C` to `C ^ D(C)`.
fn parity_inverse(w: u32) -> &'static [Plane] {
    static CACHE: [OnceLock<Vec<Plane>>; 7] = [const { OnceLock::new() }; 7];
    let slot = LANE_WIDTHS.iter().position(|&lw| lw == w).expect("valid lane width");
    CACHE[slot].get_or_init(|| {
        let n = 5 * w as usize;
        // Column j of (I + M) is the image of basis vector j.
        let mut rows = vec![[0u64; 5]; n];
        for j in 0..n {
            let mut e = [0u64; 5];
            e[j / w as usize] = 1 << (j % w as usize);
            let d = theta_d(w, &e);
            let img: [u64; 5] = std::array::from_fn(|x| e[x] ^ d[x]);
            let img = lanes_to_plane(w, &img);
            for (i, row) in rows.iter_mut().enumerate() {
                if plane_get(&img, i) {
                    plane_flip(row, j);
                }
            }
        }
        let mut inv: Vec<Plane> = (0..n)
            .map(|i| {
                let mut r = [0; 5];
                plane_flip(&mut r, i);
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| plane_get(&rows[r], col))
                .expect("theta is invertible");
            rows.swap(col, pivot);
            inv.swap(col, pivot);
            for r in 0..n {
                if r != col && plane_get(&rows[r], col) {
                    let (src, src_inv) = (rows[col], inv[col]);
                    for k in 0..5 {
                        rows[r][k] ^= src[k];
                        inv[r][k] ^= src_inv[k];
                    }
                }
            }
        }
        inv
    })
}

pub fn theta_inverse(state: &KeccakState) -> KeccakState {
    let w = state.lane_width();
    let parity: [u64; 5] = std::array::from_fn(|x| (0..5).fold(0, |acc, y| acc ^ state.lane(x, y)));
    let p_out = lanes_to_plane(w, &parity);
    let mut p_in = [0u64; 5];
    for (i, row) in parity_inverse(w).iter().enumerate() {
        let bit = row.iter().zip(&p_out).fold(0, |acc, (a, b)| acc ^ (a & b).count_ones()) & 1;
        if bit == 1 {
            plane_flip(&mut p_in, i);
        }
    }
    let d = theta_d(w, &plane_to_lanes(w, &p_in));
    let mut out = *state;
    for (x, dx) in d.iter().enumerate() {
        for y in 0..5 {
            out.set_lane(x, y, state.lane(x, y) ^ dx);
        }
    }
    out
}

pub fn rho_inverse(state: &KeccakState) -> KeccakState {
    let w = state.lane_width();
    let mut out = *state;
    for x in 0..5 {
        for y in 0..5 {
            let r = RHO_OFFSETS[lane_index(x, y)] % w;
            out.set_lane(x, y, rotl_lane(state.lane(x, y), (w - r) % w, w));
        }
    }
    out
}

pub fn pi_inverse(state: &KeccakState) -> KeccakState {
    let mut out = *state;
    for x in 0..5 {
        for y in 0..5 {
            out.set_lane(x, y, state.lane(y, (2 * x + 3 * y) % 5));
        }
    }
    out
}

fn chi_inverse_table() -> &'static [u8; 32] {
    static TABLE: OnceLock<[u8; 32]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u8; 32];
        for v in 0..32u8 {
            let out = chi_row(std::array::from_fn(|i| v >> i & 1 == 1));
            let packed = out.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b as u8) << i);
            t[packed as usize] = v;
        }
        t
    })
}

pub fn chi_inverse(state: &KeccakState) -> KeccakState {
    let table = chi_inverse_table();
    let w = state.lane_width() as usize;
    let mut out = *state;
    for y in 0..5 {
        for z in 0..w {
            let packed = (0..5).fold(0usize, |acc, x| acc | (state.get(x, y, z) as usize) << x);
            let inv = table[packed];
            for x in 0..5 {
                out.set(x, y, z, inv >> x & 1 == 1);
            }
        }
    }
    out
}

pub fn inverse_round(state: &KeccakState, round_index: usize) -> Result<KeccakState, KeccakError> {
    let s = iota(state, round_index)?;
    Ok(theta_inverse(&rho_inverse(&pi_inverse(&chi_inverse(&s)))))
}

pub fn inverse_permute(state: &KeccakState, params: &KeccakParams) -> Result<KeccakState, KeccakError> {
    params
        .round_indices()
        .rev()
        .try_fold(*state, |s, idx| inverse_round(&s, idx))
}
