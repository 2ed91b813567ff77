//! Exponential sums `E(u p^{-m}, f) = p^{-2m} Σ_{(x, y) mod p^m} Ψ(u f(x, y) / p^m)`,
//! `Ψ(z) = exp(2πi {z}_p)`, by direct summation and from zeta coefficients.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{candidate_poles_global, ArithError};
use crate::frac::{to_f64, Q};
use crate::padic::{enumerate_characters, is_prime, measure_level_sets, Character, MeasureOptions, PadicError};
use crate::poly::Poly;
use crate::zeta::{zeta_series, ZetaError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpSumError {
    #[error("{p}^{exp} points exceed the budget of {budget}")]
    Budget { p: u64, exp: u32, budget: u64 },
    #[error("denominator {den} is not a power of {p}")]
    BadDenominator { den: BigInt, p: u64 },
    #[error("{u} is not a unit modulo {p}")]
    NotAUnit { u: u64, p: u64 },
    #[error("m must be at least 1")]
    ZeroLevel,
    #[error("the Gauss sum of the trivial character is not used")]
    TrivialCharacter,
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Denef,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpSumResult {
    pub p: u64,
    pub m: u32,
    pub u: u64,
    pub re: f64,
    pub im: f64,
    pub method: Method,
    pub error_bound: f64,
}

impl ExpSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `Ψ(r) = exp(2πi {r}_p)` for `r` with denominator a power of `p`.
pub fn additive_char(r: &Q, p: u64) -> Result<Complex64, ExpSumError> {
    let mut d = r.denom().clone();
    let pb = BigInt::from(p);
    while d.is_multiple_of(&pb) {
        d /= &pb;
    }
    if d != BigInt::from(1) {
        return Err(ExpSumError::BadDenominator { den: r.denom().clone(), p });
    }
    let frac = r.numer().mod_floor(r.denom());
    let x = to_f64(&Q::new(frac, r.denom().clone()));
    Ok(Complex64::from_polar(1.0, TAU * x))
}

#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: Complex64,
    comp: Complex64,
}

impl Kahan {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Counts of `f(x, y) mod p^m` over `(Z/p^m)²`.
struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    fn build(f: &Poly, p: u64, m: u32, budget: u64) -> Result<Self, ExpSumError> {
        if m == 0 {
            return Err(ExpSumError::ZeroLevel);
        }
        if !is_prime(p) {
            return Err(PadicError::NotPrime { p }.into());
        }
        let pm = p.checked_pow(m).filter(|v| *v <= u32::MAX as u64);
        let pm = match pm.and_then(|v| v.checked_mul(v)).filter(|n| *n <= budget) {
            Some(_) => pm.unwrap(),
            None => return Err(ExpSumError::Budget { p, exp: 2 * m, budget }),
        };
        let mb = BigInt::from(pm);
        let terms: Vec<(u32, u32, u128)> =
            f.terms().map(|((i, j), c)| (i, j, c.mod_floor(&mb).to_u128().expect("reduced coefficient"))).collect();
        let modulus = pm as u128;
        let pow_table = |base: u64, max: u32| -> Vec<u128> {
            let mut v = vec![1 % modulus];
            for _ in 0..max {
                let last = *v.last().unwrap();
                v.push(last * base as u128 % modulus);
            }
            v
        };
        let (dx, dy) = (f.degree_x(), f.degree_y());
        let counts = (0..pm)
            .into_par_iter()
            .map(|x| {
                let xp = pow_table(x, dx);
                let mut h = vec![0u64; pm as usize];
                for y in 0..pm {
                    let yp = pow_table(y, dy);
                    let v = terms
                        .iter()
                        .fold(0u128, |acc, &(i, j, c)| (acc + c * xp[i as usize] % modulus * yp[j as usize]) % modulus);
                    h[v as usize] += 1;
                }
                h
            })
            .reduce(
                || vec![0u64; pm as usize],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok(Histogram { counts })
    }

    fn sum_at(&self, u: u64) -> Complex64 {
        let pm = self.counts.len() as u64;
        let total = (pm * pm) as f64;
        let mut acc = Kahan::default();
        for (r, &n) in self.counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            let phase = (u as u128 * r as u128 % pm as u128) as f64 / pm as f64;
            acc.add(Complex64::from_polar(n as f64 / total, TAU * phase));
        }
        acc.sum
    }
}

pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

pub fn exp_sum_direct(f: &Poly, p: u64, m: u32, u: u64, budget: u64) -> Result<ExpSumResult, ExpSumError> {
    if u % p == 0 {
        return Err(ExpSumError::NotAUnit { u, p });
    }
    let h = Histogram::build(f, p, m, budget)?;
    let z = h.sum_at(u);
    Ok(ExpSumResult { p, m, u, re: z.re, im: z.im, method: Method::Direct, error_bound: 0.0 })
}

/// `g_χ = (q − 1)^{-1} q^{1−c} Σ_{x ∈ (Z/p^c)^×} χ(x) Ψ(x / p^c)`.
pub fn gauss_sum(chi: &Character) -> Result<Complex64, ExpSumError> {
    if chi.is_trivial() {
        return Err(ExpSumError::TrivialCharacter);
    }
    let p = chi.p;
    let m = chi.modulus();
    let mut acc = Kahan::default();
    for x in (1..m).filter(|x| x % p != 0) {
        acc.add(chi.eval(x)? * Complex64::from_polar(1.0, TAU * x as f64 / m as f64));
    }
    let scale = 1.0 / ((p - 1) as f64 * (p as f64).powi(chi.conductor as i32 - 1));
    Ok(acc.sum * scale)
}

/// `E(u p^{-m}, f)` from the coefficients of `Z(s, f, χ)` for all `χ` of
/// conductor at most `m`.
pub fn exp_sum_denef(f: &Poly, p: u64, m: u32, u: u64, opts: &MeasureOptions) -> Result<ExpSumResult, ExpSumError> {
    Ok(exp_sum_denef_many(f, p, m, &[u], opts)?.remove(0))
}

/// [`exp_sum_denef`] for several units sharing one level-set table.
pub fn exp_sum_denef_many(
    f: &Poly,
    p: u64,
    m: u32,
    units: &[u64],
    opts: &MeasureOptions,
) -> Result<Vec<ExpSumResult>, ExpSumError> {
    if m == 0 {
        return Err(ExpSumError::ZeroLevel);
    }
    if let Some(&u) = units.iter().find(|u| *u % p == 0) {
        return Err(ExpSumError::NotAUnit { u, p });
    }
    let table = measure_level_sets(f, p, m - 1, m, opts)?;
    let triv = zeta_series(&table, &Character::trivial(p))?;
    let a: Vec<Q> = triv.rational_coeffs().expect("trivial character");
    let qf = Q::from_integer(p.into());
    let one = Q::from_integer(1.into());
    // Z(0, χ_triv) = ∫ 1, known exactly.
    let z0 = table.region.clone();
    let w = |n: u32| if n == 0 { -(&qf / (&qf - &one)) } else { -one.clone() };
    let coeff: Q = (0..m).map(|k| &a[k as usize] * w(m - 1 - k)).sum();
    let base = to_f64(&(z0 + coeff));
    let mut twisted = Vec::new();
    for chi in enumerate_characters(p, m)?.into_iter().filter(|c| !c.is_trivial()) {
        let am = zeta_series(&table, &chi)?.coeffs[(m - chi.conductor) as usize].to_complex();
        if am.norm() == 0.0 {
            continue;
        }
        twisted.push((chi, gauss_sum(&chi.inverse())? * am));
    }
    let bound = to_f64(&table.tail_unresolved) * (1.0 + p as f64 / (p as f64 - 1.0));
    units
        .iter()
        .map(|&u| {
            let mut acc = Kahan::default();
            acc.add(Complex64::new(base, 0.0));
            for (chi, g) in &twisted {
                acc.add(*g * chi.eval(u)?);
            }
            let z = acc.sum;
            Ok(ExpSumResult { p, m, u, re: z.re, im: z.im, method: Method::Denef, error_bound: bound })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayRow {
    pub m: u32,
    pub max_abs: f64,
    /// `max_u |E| / (p^{βm} · m)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub p: u64,
    #[serde(with = "crate::frac::serde_q")]
    pub beta: Q,
    pub rows: Vec<DecayRow>,
    /// Last ratio over first ratio.
    pub rho: f64,
    pub slack: f64,
    pub violated: bool,
}

#[derive(Clone, Debug)]
pub struct DecayOptions {
    /// Taken from the candidate pole set when `None`.
    pub beta: Option<Q>,
    pub slack: f64,
    pub budget: u64,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions { beta: None, slack: 2.0, budget: DEFAULT_POINT_BUDGET }
    }
}

pub fn decay_report(f: &Poly, p: u64, m_max: u32, opts: &DecayOptions) -> Result<DecayReport, ExpSumError> {
    let beta = match &opts.beta {
        Some(b) => b.clone(),
        None => candidate_poles_global(f, p)?.beta,
    };
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let h = Histogram::build(f, p, m, opts.budget)?;
        let pm = p.pow(m);
        let max_abs =
            (1..pm).into_par_iter().filter(|u| u % p != 0).map(|u| h.sum_at(u).norm()).reduce(|| 0.0, f64::max);
        let scale = (p as f64).powf(to_f64(&beta) * m as f64) * m as f64;
        rows.push(DecayRow { m, max_abs, ratio: max_abs / scale });
    }
    let rho = match (rows.first(), rows.last()) {
        (Some(a), Some(b)) if a.ratio > 0.0 => b.ratio / a.ratio,
        (Some(_), Some(b)) if b.ratio == 0.0 => 0.0,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 0.0,
    };
    Ok(DecayReport { p, beta, rows, rho, slack: opts.slack, violated: rho > opts.slack })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::q;

    #[test]
    fn additive_character() {
        assert!((additive_char(&q(0, 1), 5).unwrap() - 1.0).norm() < 1e-15);
        assert!((additive_char(&q(1, 2), 2).unwrap() + 1.0).norm() < 1e-15);
        let z = additive_char(&q(1, 5), 5).unwrap();
        assert!((z.norm() - 1.0).abs() < 1e-15);
        assert!((z - Complex64::from_polar(1.0, TAU / 5.0)).norm() < 1e-15);
        assert!((additive_char(&q(-4, 5), 5).unwrap() - z).norm() < 1e-12);
        assert!(additive_char(&q(1, 6), 5).is_err());
    }

    #[test]
    fn trivial_sums() {
        let e = exp_sum_direct(&Poly::x(), 7, 1, 1, DEFAULT_POINT_BUDGET).unwrap();
        assert!(e.value().norm() < 1e-12);
        let e = exp_sum_direct(&Poly::zero(), 5, 2, 3, DEFAULT_POINT_BUDGET).unwrap();
        assert!((e.value() - 1.0).norm() < 1e-12);
        assert!(matches!(exp_sum_direct(&Poly::x(), 5, 6, 1, 1000), Err(ExpSumError::Budget { .. })));
    }

    #[test]
    fn gauss_sums() {
        let quad = Character::new(5, 1, 2).unwrap();
        let g = gauss_sum(&quad).unwrap();
        assert!((g - Complex64::new(5f64.sqrt() / 4.0, 0.0)).norm() < 1e-12);
        let g = gauss_sum(&Character::new(3, 1, 1).unwrap()).unwrap();
        assert!((g - Complex64::new(0.0, 3f64.sqrt() / 2.0)).norm() < 1e-12);
        assert!(gauss_sum(&Character::trivial(3)).is_err());
    }

    #[test]
    fn denef_for_a_line() {
        let d = exp_sum_denef(&Poly::x(), 3, 2, 1, &MeasureOptions::default()).unwrap();
        assert!(d.value().norm() < 1e-12);
    }
}
