use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{is_prime, phi_prime_power, PadicError};

/// `ζ_n^idx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub idx: u64,
    pub n: u64,
}

impl RootOfUnity {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.idx as f64 / self.n as f64)
    }
}

/// Character of `(Z/p^c)^×` sending the fixed generator `g` to `ζ^k`,
/// `ζ = exp(2πi/φ(p^c))`. The conductor is always minimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub p: u64,
    pub conductor: u32,
    pub k: u64,
}

/// Smallest `g` generating `(Z/p^c)^×` for every `c` (`p` odd), or the
/// generator `3` of `(Z/4)^×` for `p = 2`.
pub fn generator(p: u64) -> u64 {
    if p == 2 {
        return 3;
    }
    let p2 = p * p;
    let order = p * (p - 1);
    let mut prime_factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_factors.push(m);
    }
    (2..p2)
        .find(|g| g % p != 0 && prime_factors.iter().all(|q| powmod(*g, order / q, p2) != 1))
        .expect("a primitive root exists")
}

fn powmod(b: u64, e: u64, m: u64) -> u64 {
    crate::poly::powmod(b, e, m)
}

type DlogCache = Mutex<HashMap<(u64, u32), Arc<Vec<u64>>>>;

/// Discrete logarithms base `generator(p)` of all units mod `p^c`.
fn dlog_table(p: u64, c: u32) -> Arc<Vec<u64>> {
    static CACHE: OnceLock<DlogCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&(p, c)) {
        return t.clone();
    }
    let m = p.pow(c);
    let phi = phi_prime_power(p, c);
    let g = generator(p) % m;
    let mut table = vec![u64::MAX; m as usize];
    let mut x = 1 % m;
    for e in 0..phi {
        table[x as usize] = e;
        x = x * g % m;
    }
    let t = Arc::new(table);
    cache.lock().unwrap().insert((p, c), t.clone());
    t
}

impl Character {
    pub fn trivial(p: u64) -> Self {
        Character { p, conductor: 1, k: 0 }
    }

    /// Normalizes the conductor down while `p | k`.
    pub fn new(p: u64, c: u32, k: u64) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime { p });
        }
        if c == 0 {
            return Ok(Self::trivial(p));
        }
        if p == 2 && c > 2 {
            return Err(PadicError::UnsupportedConductor { c });
        }
        let (mut c, mut k) = (c, k % phi_prime_power(p, c));
        while c >= 2 && k % p == 0 {
            k /= p;
            c -= 1;
        }
        if c == 1 && p == 2 {
            k = 0;
        }
        Ok(Character { p, conductor: c, k })
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.conductor)
    }

    pub fn order_of_values(&self) -> u64 {
        phi_prime_power(self.p, self.conductor)
    }

    /// `χ⁻¹ = χ̄`.
    pub fn inverse(&self) -> Self {
        let n = self.order_of_values();
        Character { k: (n - self.k) % n, ..*self }
    }

    /// Order of `χ` in the character group.
    pub fn order(&self) -> u64 {
        let n = self.order_of_values();
        n / self.k.gcd(&n)
    }

    /// `χ^m` is trivial.
    pub fn power_is_trivial(&self, m: u64) -> bool {
        m % self.order() == 0
    }

    /// Exact value `ζ^{k·log_g u}` at a unit `u` (any representative).
    pub fn eval_root(&self, u: u64) -> Result<RootOfUnity, PadicError> {
        if u % self.p == 0 {
            return Err(PadicError::NotAUnit { u, p: self.p });
        }
        let n = self.order_of_values();
        if self.k == 0 {
            return Ok(RootOfUnity { idx: 0, n });
        }
        let log = dlog_table(self.p, self.conductor)[(u % self.modulus()) as usize];
        Ok(RootOfUnity { idx: (self.k as u128 * log as u128 % n as u128) as u64, n })
    }

    pub fn eval(&self, u: u64) -> Result<Complex64, PadicError> {
        self.eval_root(u).map(RootOfUnity::to_complex)
    }

    /// Whether χ is nontrivial on `1 + pZ_p`.
    pub fn wild(&self) -> bool {
        self.conductor >= 2
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            write!(f, "triv")
        } else {
            write!(f, "c{}k{}", self.conductor, self.k)
        }
    }
}

/// All characters of conductor at most `c_max`, grouped by conductor.
pub fn enumerate_characters(p: u64, c_max: u32) -> Result<Vec<Character>, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime { p });
    }
    if p == 2 && c_max > 2 {
        return Err(PadicError::UnsupportedConductor { c: c_max });
    }
    let mut out = vec![Character::trivial(p)];
    if p != 2 {
        out.extend((1..p - 1).map(|k| Character { p, conductor: 1, k }));
    }
    for c in 2..=c_max {
        let n = phi_prime_power(p, c);
        out.extend((1..n).filter(|k| k % p != 0).map(|k| Character { p, conductor: c, k }));
    }
    Ok(out)
}
