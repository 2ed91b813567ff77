//! Valuations, angular components, characters of `Z_p^×` and exact level-set
//! measures of a polynomial on `Z_p²`.

mod character;
mod levels;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use character::{enumerate_characters, Character, RootOfUnity};
pub use levels::{measure_level_sets, CellStats, LevelSetTable, MeasureOptions, Resolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("0 has infinite valuation")]
    InfiniteValuation,
    #[error("{u} is not a unit modulo {p}")]
    NotAUnit { u: u64, p: u64 },
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("characters of conductor {c} are not supported for p = 2 (c <= 2)")]
    UnsupportedConductor { c: u32 },
    #[error("cell budget of {budget} exceeded")]
    CellBudget { budget: u64 },
    #[error("p^{exp} with p = {p} exceeds the supported coordinate range")]
    PrecisionTooLarge { p: u64, exp: u32 },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `n = p^v · w` with `p ∤ w`; returns `(v, w mod p^c)`.
pub fn valuation_and_ac(n: &BigInt, p: u64, c: u32) -> Result<(u32, u64), PadicError> {
    if n.is_zero() {
        return Err(PadicError::InfiniteValuation);
    }
    let pb = BigInt::from(p);
    let mut w = n.clone();
    let mut v = 0u32;
    loop {
        let (q, r) = w.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        w = q;
        v += 1;
    }
    let m = BigInt::from(p).pow(c);
    let u = w.mod_floor(&m).to_u64().expect("residue fits in u64");
    Ok((v, u))
}

/// Valuation of `n`, capped at `cap` (`n = 0` gives `cap`).
pub fn valuation_capped(n: &BigInt, p: u64, cap: u32) -> u32 {
    if n.is_zero() {
        return cap;
    }
    let pb = BigInt::from(p);
    let mut w = n.clone();
    let mut v = 0;
    while v < cap {
        let (q, r) = w.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        w = q;
        v += 1;
    }
    v
}

pub(crate) fn phi_prime_power(p: u64, c: u32) -> u64 {
    (p - 1) * p.pow(c - 1)
}
