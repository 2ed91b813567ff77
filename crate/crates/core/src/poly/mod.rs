//! Sparse bivariate polynomials with arbitrary-precision integer coefficients.
//!
//! A [`Poly`] maps exponent pairs `(i, j)` (for `x^i y^j`) to nonzero
//! [`BigInt`] coefficients. Everything downstream (Newton polygons, weighted
//! decompositions, the p-adic cell oracle) reads polynomials through this type.

mod modp;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub(crate) use modp::powmod;
pub use modp::{ModPoly, UniPolyFp};
pub use parse::{parse_poly, ParseError};

/// Exponent pair `(i, j)` standing for `x^i y^j`.
pub type Monomial = (u32, u32);

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(1, 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn monomial(c: impl Into<BigInt>, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((i, j), c.into());
        p
    }

    /// Builds a polynomial from `(i, j, coefficient)` triples, merging repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (i, j, c) in terms {
            p.add_term((i, j), c.into());
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn support(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|m| m.1).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(0, 0)
    }

    /// Keeps the terms whose exponents satisfy `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(Monomial) -> bool) -> Poly {
        Poly { terms: self.terms.iter().filter(|(m, _)| keep(**m)).map(|(m, c)| (*m, c.clone())).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        // Horner in y over x-polynomials keeps the number of big powers small.
        let dy = self.degree_y();
        let mut rows: Vec<BigInt> = vec![BigInt::zero(); dy as usize + 1];
        let mut xpow: BTreeMap<u32, BigInt> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            let xp = xpow.entry(*i).or_insert_with(|| x.pow(*i));
            rows[*j as usize] += c * &*xp;
        }
        let mut acc = BigInt::zero();
        for r in rows.iter().rev() {
            acc = acc * y + r;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64, y: i64) -> BigInt {
        self.eval(&BigInt::from(x), &BigInt::from(y))
    }

    pub fn derivative_x(&self) -> Poly {
        let mut out = Poly::zero();
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                out.add_term((i - 1, *j), c * BigInt::from(*i));
            }
        }
        out
    }

    pub fn derivative_y(&self) -> Poly {
        let mut out = Poly::zero();
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                out.add_term((*i, j - 1), c * BigInt::from(*j));
            }
        }
        out
    }

    pub fn grad(&self) -> (Poly, Poly) {
        (self.derivative_x(), self.derivative_y())
    }

    /// Divided-derivative (Taylor) coefficient polynomials:
    /// `f(x + s, y + t) = Σ T_{a,b}(x, y) s^a t^b`.
    ///
    /// Every `T_{a,b}` has integer coefficients `C(i,a) C(j,b) c_{ij}`.
    pub fn taylor_polys(&self) -> Vec<(Monomial, Poly)> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            for a in 0..=*i {
                let ca = binomial(*i, a);
                for b in 0..=*j {
                    let cb = binomial(*j, b);
                    out.entry((a, b)).or_default().add_term((i - a, j - b), c * &ca * &cb);
                }
            }
        }
        out.into_iter().filter(|(_, p)| !p.is_zero()).collect()
    }

    /// Reduction of the coefficients into `[0, p)`; vanishing terms are dropped.
    pub fn reduce_mod_p(&self, p: u64) -> ModPoly {
        ModPoly::from_poly(self, p)
    }

    /// `f(1, y^a)` as a dense univariate polynomial (lowest degree first).
    pub fn univariate_restriction(&self, a: u32) -> Vec<BigInt> {
        assert!(a >= 1, "substitution exponent must be positive");
        let deg = self.terms.keys().map(|m| m.1 * a).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); deg as usize + 1];
        for ((_, j), c) in &self.terms {
            out[(j * a) as usize] += c;
        }
        while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
            out.pop();
        }
        out
    }

    /// Groups the support by weighted degree `a·i + b·j`.
    pub fn sqh_decompose(&self, weight: Weight) -> Result<SqhDecomposition, PolyError> {
        let (a, b) = (weight.0, weight.1);
        if a == 0 || b == 0 || a.gcd(&b) != 1 {
            return Err(PolyError::BadWeight { a, b });
        }
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut parts: BTreeMap<u64, Poly> = BTreeMap::new();
        for ((i, j), c) in &self.terms {
            let d = a * u64::from(*i) + b * u64::from(*j);
            parts.entry(d).or_default().add_term((*i, *j), c.clone());
        }
        Ok(SqhDecomposition {
            weight,
            parts: parts.into_iter().map(|(degree, poly)| QuasiPart { degree, poly }).collect(),
        })
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for t in 0..k {
        r = r * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    r
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("weight ({a}, {b}) must be a pair of coprime positive integers")]
    BadWeight { a: u64, b: u64 },
    #[error("the zero polynomial has no weighted decomposition")]
    ZeroPolynomial,
}

/// Weight `(a, b)`: `x` has weight `a`, `y` has weight `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub u64, pub u64);

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiPart {
    pub degree: u64,
    pub poly: Poly,
}

/// `f = Σ f_j`, each `f_j` quasihomogeneous of weighted degree `d_j`,
/// with `d_0 < d_1 < …`. `parts[0]` is the quasihomogeneous tangent cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqhDecomposition {
    pub weight: Weight,
    pub parts: Vec<QuasiPart>,
}

impl SqhDecomposition {
    pub fn tangent_cone(&self) -> &Poly {
        &self.parts[0].poly
    }

    pub fn base_degree(&self) -> u64 {
        self.parts[0].degree
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.degree).collect()
    }

    pub fn sum(&self) -> Poly {
        self.parts.iter().fold(Poly::zero(), |acc, part| &acc + &part.poly)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first, ties by larger x exponent.
        let mut ordered: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        ordered.sort_by_key(|(m, _)| std::cmp::Reverse((m.0 + m.1, m.0)));
        for (k, ((i, j), c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                factors.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{j}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_poly(&text).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Poly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
