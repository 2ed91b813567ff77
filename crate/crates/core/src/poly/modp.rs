use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Monomial, Poly};

/// Bivariate polynomial over `F_p`, coefficients in `[1, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModPoly {
    p: u64,
    terms: BTreeMap<Monomial, u64>,
}

pub(crate) fn mod_big(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = r.to_i128().expect("residue fits");
    r.rem_euclid(p as i128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl ModPoly {
    pub fn from_poly(f: &Poly, p: u64) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in f.terms() {
            let r = mod_big(c, p);
            if r != 0 {
                terms.insert(m, r);
            }
        }
        ModPoly { p, terms }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> u64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.keys().copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, u64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        let (x, y) = (x % p, y % p);
        let mut acc = 0u64;
        for ((i, j), c) in &self.terms {
            let t = mulmod(mulmod(*c, powmod(x, *i as u64, p), p), powmod(y, *j as u64, p), p);
            acc = (acc + t) % p;
        }
        acc
    }

    pub fn derivative_x(&self) -> ModPoly {
        self.derive(|(i, j)| (i > 0).then(|| ((i - 1, j), i)))
    }

    pub fn derivative_y(&self) -> ModPoly {
        self.derive(|(i, j)| (j > 0).then(|| ((i, j - 1), j)))
    }

    fn derive(&self, rule: impl Fn(Monomial) -> Option<(Monomial, u32)>) -> ModPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((m2, k)) = rule(*m) {
                let v = mulmod(*c, k as u64 % self.p, self.p);
                if v != 0 {
                    terms.insert(m2, v);
                }
            }
        }
        ModPoly { p: self.p, terms }
    }

    /// True when `f = f_x = f_y = 0` at the point.
    pub fn is_singular_zero(&self, x: u64, y: u64) -> bool {
        self.eval(x, y) == 0 && self.derivative_x().eval(x, y) == 0 && self.derivative_y().eval(x, y) == 0
    }

    /// `f(1, y^a)` over `F_p`.
    pub fn univariate_restriction(&self, a: u32) -> UniPolyFp {
        let deg = self.terms.keys().map(|m| m.1 * a).max().unwrap_or(0) as usize;
        let mut coeffs = vec![0u64; deg + 1];
        for ((_, j), c) in &self.terms {
            let k = (j * a) as usize;
            coeffs[k] = (coeffs[k] + c) % self.p;
        }
        UniPolyFp::new(coeffs, self.p)
    }
}

impl fmt::Debug for ModPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModPoly[p={}]{:?}", self.p, self.terms)
    }
}

impl Add for &ModPoly {
    type Output = ModPoly;
    fn add(self, rhs: &ModPoly) -> ModPoly {
        assert_eq!(self.p, rhs.p);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let e = terms.entry(*m).or_insert(0);
            *e = (*e + c) % self.p;
            if *e == 0 {
                terms.remove(m);
            }
        }
        ModPoly { p: self.p, terms }
    }
}

impl Mul for &ModPoly {
    type Output = ModPoly;
    fn mul(self, rhs: &ModPoly) -> ModPoly {
        assert_eq!(self.p, rhs.p);
        let p = self.p;
        let mut terms: BTreeMap<Monomial, u64> = BTreeMap::new();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &rhs.terms {
                let e = terms.entry((i1 + i2, j1 + j2)).or_insert(0);
                *e = (*e + mulmod(*c1, *c2, p)) % p;
            }
        }
        terms.retain(|_, c| *c != 0);
        ModPoly { p, terms }
    }
}

pub(crate) fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Dense univariate polynomial over `F_p`, lowest degree first, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl UniPolyFp {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPolyFp { p, coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: u64) -> u64 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, c| (mulmod(acc, t % p, p) + c) % p)
    }

    /// Divides by `(y - θ)`; returns the quotient and the remainder `g(θ)`.
    pub fn synthetic_division(&self, theta: u64) -> (UniPolyFp, u64) {
        let p = self.p;
        if self.coeffs.is_empty() {
            return (self.clone(), 0);
        }
        let n = self.coeffs.len();
        let mut q = vec![0u64; n - 1];
        let mut carry = 0u64;
        for k in (0..n).rev() {
            let v = (self.coeffs[k] + mulmod(carry, theta, p)) % p;
            if k == 0 {
                return (UniPolyFp::new(q, p), v);
            }
            q[k - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Multiplicity of `θ` as a root; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, theta: u64) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut g = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = g.synthetic_division(theta);
            if r != 0 {
                return Some(m);
            }
            m += 1;
            g = q;
        }
    }

    /// Roots in `F_p^×`, ascending.
    pub fn unit_roots(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        (1..self.p).filter(|t| self.eval(*t) == 0).collect()
    }
}
