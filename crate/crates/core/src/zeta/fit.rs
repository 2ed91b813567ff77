use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::ratfun::{poly_mul, DenFactor, RationalFunctionT};
use crate::frac::Q;

#[derive(Clone, Debug)]
pub struct FitOptions {
    /// Largest multiplicity tried per factor.
    pub m_max: u32,
    /// Numerator degree; `K − deg D − 3` when `None`.
    pub num_degree: Option<usize>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { m_max: 2, num_degree: None }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("K = {k} is too small for any denominator over the basis (need K >= deg D + deg N + 3)")]
    InsufficientK { k: usize },
    #[error("empty factor basis")]
    EmptyBasis,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FitOutcome {
    Consistent {
        function: RationalFunctionT,
        /// Multiplicities in basis order, before cancellation.
        multiplicities: Vec<u32>,
        checked: usize,
    },
    Inconsistent {
        /// Smallest index `n` with `(D·S)_n ≠ 0` beyond the numerator degree, for
        /// the denominator that got furthest.
        first_violation: usize,
        multiplicities: Vec<u32>,
        tried: usize,
    },
}

impl FitOutcome {
    pub fn is_consistent(&self) -> bool {
        matches!(self, FitOutcome::Consistent { .. })
    }
}

/// Every vector in `{0..m_max}^n`, by total denominator degree then lexicographically.
fn multiplicity_vectors(basis: &[(u64, u64)], m_max: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in basis {
        out = out.into_iter().flat_map(|v| (0..=m_max).map(move |m| [v.clone(), vec![m]].concat())).collect();
    }
    let degree = |v: &Vec<u32>| -> u64 { v.iter().zip(basis).map(|(m, (_, b))| *m as u64 * b).sum() };
    out.sort_by(|x, y| degree(x).cmp(&degree(y)).then_with(|| x.cmp(y)));
    out
}

/// Looks for `N/D` with `D = Π (1 − q^{−A} t^B)^m` over `basis` reproducing
/// `series[0..=K]` exactly.
pub fn fit_rational(series: &[Q], q: u64, basis: &[(u64, u64)], opts: &FitOptions) -> Result<FitOutcome, FitError> {
    if basis.is_empty() {
        return Err(FitError::EmptyBasis);
    }
    let k = series.len().saturating_sub(1);
    let mut best: Option<(usize, Vec<u32>)> = None;
    let mut tried = 0;
    for mults in multiplicity_vectors(basis, opts.m_max) {
        let factors: Vec<DenFactor> = basis.iter().zip(&mults).map(|(&(a, b), &m)| DenFactor { a, b, m }).collect();
        let shell = RationalFunctionT::new(q, Vec::new(), factors);
        let deg_d = shell.denominator_degree();
        let deg_n = match opts.num_degree {
            Some(d) if d + deg_d + 3 <= k => d,
            Some(_) => continue,
            None if deg_d + 3 <= k => k - deg_d - 3,
            None => continue,
        };
        tried += 1;
        let ds = poly_mul(&shell.expanded_denominator(), series);
        match (deg_n + 1..=k).find(|&i| !ds[i].is_zero()) {
            None => {
                let function =
                    RationalFunctionT::new(q, ds[..=deg_n].to_vec(), shell.factors.clone()).cancel_common_factors();
                return Ok(FitOutcome::Consistent { function, multiplicities: mults, checked: k + 1 });
            }
            Some(i) => {
                if best.as_ref().is_none_or(|(j, _)| i > *j) {
                    best = Some((i, mults));
                }
            }
        }
    }
    match best {
        Some((first_violation, multiplicities)) => {
            Ok(FitOutcome::Inconsistent { first_violation, multiplicities, tried })
        }
        None => Err(FitError::InsufficientK { k }),
    }
}
