//! Object names: numerals, R-names, the shortlex enumeration of relation
//! programs, and Gödel numbering.

mod enumerate;
mod godel;

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

pub use enumerate::{check_relation_program, count_programs, nth_program, nth_program_with_cap, rank_program, DEFAULT_LENGTH_CAP};
pub use godel::{godel_decode, godel_encode, godel_encode_bytes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NamingError {
    #[error("length cap {cap} reached before the requested index")]
    ResourceLimit { cap: usize },
    #[error("not a relation program: {0}")]
    NotARelationProgram(String),
    #[error("byte 0x{byte:02x} at {pos} is outside the alphabet")]
    NonAlphabetSymbol { pos: usize, byte: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectName {
    Numeral(BigUint),
    RName(BigUint),
}

impl ObjectName {
    pub fn numeral(n: u64) -> Self {
        ObjectName::Numeral(BigUint::from(n))
    }

    pub fn rname(i: u64) -> Self {
        ObjectName::RName(BigUint::from(i))
    }

    pub fn parse(text: &str) -> Option<Self> {
        match classify_name(text) {
            Classified::Numeral(n) => Some(ObjectName::Numeral(n)),
            Classified::RName(i) => Some(ObjectName::RName(i)),
            Classified::Invalid => None,
        }
    }

    pub fn is_relation(&self) -> bool {
        matches!(self, ObjectName::RName(_))
    }

    /// The k-th object of the canonical stream 0, R0, 1, R1, ...
    pub fn stream(k: u64) -> Self {
        if k % 2 == 0 {
            ObjectName::numeral(k / 2)
        } else {
            ObjectName::rname(k / 2)
        }
    }
}

impl fmt::Display for ObjectName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectName::Numeral(n) => write!(f, "{n}"),
            ObjectName::RName(i) => write!(f, "R{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classified {
    Numeral(BigUint),
    RName(BigUint),
    Invalid,
}

fn canonical_decimal(s: &str) -> Option<BigUint> {
    let ok = !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if ok {
        s.parse().ok()
    } else {
        None
    }
}

/// Total classification of a text as a name.
pub fn classify_name(text: &str) -> Classified {
    if let Some(n) = canonical_decimal(text) {
        return Classified::Numeral(n);
    }
    match text.strip_prefix('R').and_then(canonical_decimal) {
        Some(i) => Classified::RName(i),
        None => Classified::Invalid,
    }
}
