//! Exact elements of `Q(ζ_n)` as rational combinations of powers of `ζ_n`.
//!
//! Zero tests reduce modulo the cyclotomic polynomial `Φ_n`, so they are exact.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::frac::{to_f64, Q};

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_poly(n: usize) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in (1..n).filter(|d| n % d == 0) {
        num = divide_monic(&num, &cyclotomic_poly(d));
    }
    let out = Arc::new(num);
    cache.lock().unwrap().insert(n, out.clone());
    out
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    n: usize,
    coeffs: Vec<Q>,
}

impl CycloElem {
    pub fn zero(n: usize) -> Self {
        CycloElem { n, coeffs: vec![Q::zero(); n] }
    }

    pub fn rational(x: Q) -> Self {
        let mut e = Self::zero(1);
        e.coeffs[0] = x;
        e
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Adds `c·ζ_n^idx`.
    pub fn add_term(&mut self, idx: u64, c: &Q) {
        let i = (idx % self.n as u64) as usize;
        self.coeffs[i] += c;
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Remainder modulo `Φ_n`, degree below `φ(n)`.
    pub fn reduced(&self) -> Vec<Q> {
        let phi = cyclotomic_poly(self.n);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for k in (deg..r.len()).rev() {
            let c = r[k].clone();
            if c.is_zero() {
                continue;
            }
            for (i, pi) in phi.iter().enumerate() {
                r[k - deg + i] -= &c * Q::from_integer(pi.clone());
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Zero::is_zero)
    }

    /// The value when it is rational (exactly), else `None`.
    pub fn as_rational(&self) -> Option<Q> {
        let r = self.reduced();
        if r.iter().skip(1).all(Zero::is_zero) {
            Some(r.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.n as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| Complex64::from_polar(to_f64(c), TAU * i as f64 / n))
            .sum()
    }
}
