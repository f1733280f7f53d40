//! Bijective base-95 Gödel numbering of strings over Σ.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::NamingError;
use crate::lcore::ast::{in_sigma, SIGMA_MIN, SIGMA_SIZE};

/// Encodes `s`; digit value of a symbol is its code point minus 31.
pub fn godel_encode(s: &str) -> Result<BigUint, NamingError> {
    godel_encode_bytes(s.as_bytes())
}

pub fn godel_encode_bytes(s: &[u8]) -> Result<BigUint, NamingError> {
    if let Some(pos) = s.iter().position(|&b| !in_sigma(b)) {
        return Err(NamingError::NonAlphabetSymbol { pos, byte: s[pos] });
    }
    // Work in chunks of 9 digits (95^9 < 2^64) to keep the big-number work linear-ish.
    let mut n = BigUint::zero();
    for chunk in s.chunks(9) {
        let mut part: u64 = 0;
        let mut scale: u64 = 1;
        for &b in chunk {
            part = part * SIGMA_SIZE as u64 + (b - SIGMA_MIN + 1) as u64;
            scale *= SIGMA_SIZE as u64;
        }
        n = n * scale + part;
    }
    Ok(n)
}

/// Inverse of [`godel_encode`]; total on the naturals.
pub fn godel_decode(n: &BigUint) -> String {
    let mut out = Vec::new();
    let mut n = n.clone();
    let base = BigUint::from(SIGMA_SIZE);
    while !n.is_zero() {
        n -= 1u32;
        let d = (&n % &base).to_u8().expect("digit");
        out.push(d + SIGMA_MIN);
        n /= &base;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}
