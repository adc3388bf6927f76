//! Hex encoding for flat bit vectors.
//!
//! Bit `i` lives in byte `i / 8` at bit position `i % 8` (least significant
//! first). Bytes are written in index order as two lowercase hex digits, and
//! the final byte is zero-padded.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HexError {
    #[error("expected {expected} hex digits for {bits} bits, got {actual}")]
    Length {
        bits: usize,
        expected: usize,
        actual: usize,
    },
    #[error("invalid hex digit {0:?}")]
    Digit(char),
    #[error("padding bits beyond bit {0} must be zero")]
    Padding(usize),
}

pub(crate) fn byte_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

pub(crate) fn encode(bits: usize, get: impl Fn(usize) -> bool) -> String {
    const DIGITS: &[u8; 16] = b"0123456789abcdef";
    let mut out = String::with_capacity(2 * byte_len(bits));
    for byte_idx in 0..byte_len(bits) {
        let mut byte = 0u8;
        for j in 0..8 {
            let i = byte_idx * 8 + j;
            if i < bits && get(i) {
                byte |= 1 << j;
            }
        }
        out.push(DIGITS[(byte >> 4) as usize] as char);
        out.push(DIGITS[(byte & 0xf) as usize] as char);
    }
    out
}

/// Decodes into 64-bit words, bit `i` at word `i / 64`, position `i % 64`.
pub(crate) fn decode(s: &str, bits: usize) -> Result<Vec<u64>, HexError> {
    let s = s.trim();
    let expected = 2 * byte_len(bits);
    if s.len() != expected {
        return Err(HexError::Length {
            bits,
            expected,
            actual: s.len(),
        });
    }
    let mut words = vec![0u64; bits.div_ceil(64)];
    let digits: Vec<u8> = s
        .chars()
        .map(|c| c.to_digit(16).map(|d| d as u8).ok_or(HexError::Digit(c)))
        .collect::<Result<_, _>>()?;
    for (byte_idx, pair) in digits.chunks(2).enumerate() {
        let byte = (pair[0] << 4) | pair[1];
        for j in 0..8 {
            if byte >> j & 1 == 1 {
                let i = byte_idx * 8 + j;
                if i >= bits {
                    return Err(HexError::Padding(bits));
                }
                words[i / 64] |= 1 << (i % 64);
            }
        }
    }
    Ok(words)
}
