//! Zeta series `Z(s, f, χ) = Σ A_k t^k`, `t = q^{-s}`, rational functions in `t`,
//! the closed forms of the running example, rational fitting and the
//! one-variable integral lemmas.

mod fit;
mod golden;
mod lemmas;
mod ratfun;

use num_complex::Complex64;
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclotomic::CycloElem;
use crate::frac::Q;
use crate::padic::{Character, LevelSetTable, PadicError};

pub use fit::{fit_rational, FitError, FitOptions, FitOutcome};
pub use golden::{
    example_counts, example_polynomial, golden_character_series, golden_example_forms, GoldenCase, GoldenParams,
};
pub use lemmas::{igusa_onevar_integral, spf_data, unit_square_data, SpfData, UnitSquareData};
pub use ratfun::{monomial, poly_mul, DenFactor, RationalFunctionT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("character conductor {conductor} exceeds the table depth {depth}")]
    ConductorTooLarge { conductor: u32, depth: u32 },
    #[error("character is for p = {chi_p}, table is for p = {table_p}")]
    PrimeMismatch { chi_p: u64, table_p: u64 },
    #[error(transparent)]
    Padic(#[from] PadicError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZetaSeries {
    pub p: u64,
    pub chi: Character,
    pub k_max: u32,
    /// `A_k` as combinations of `φ(p^c)`-th roots of unity.
    pub coeffs: Vec<CycloElem>,
    /// Bound on the contribution of `t^{K+1}, t^{K+2}, …` at `|t| ≤ 1`.
    pub tail: Q,
}

pub fn zeta_series(table: &LevelSetTable, chi: &Character) -> Result<ZetaSeries, ZetaError> {
    if chi.p != table.p {
        return Err(ZetaError::PrimeMismatch { chi_p: chi.p, table_p: table.p });
    }
    if chi.conductor > table.c {
        return Err(ZetaError::ConductorTooLarge { conductor: chi.conductor, depth: table.c });
    }
    let n = chi.order_of_values() as usize;
    let roots = table.units.iter().map(|&u| chi.eval_root(u).map(|r| r.idx)).collect::<Result<Vec<_>, _>>()?;
    let coeffs = table
        .mu
        .iter()
        .map(|row| {
            let mut a = CycloElem::zero(n);
            for (m, &idx) in row.iter().zip(&roots) {
                a.add_term(idx, m);
            }
            a
        })
        .collect();
    Ok(ZetaSeries { p: table.p, chi: *chi, k_max: table.k_max, coeffs, tail: table.tail.clone() })
}

impl ZetaSeries {
    /// The coefficients when all are rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Q>> {
        self.coeffs.iter().map(CycloElem::as_rational).collect()
    }

    pub fn complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(CycloElem::to_complex).collect()
    }

    pub fn all_zero(&self) -> bool {
        self.coeffs.iter().all(CycloElem::is_zero)
    }
}

struct CoeffJson<'a>(&'a CycloElem);

impl Serialize for CoeffJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let Some(r) = self.0.as_rational() {
            return s.serialize_str(&r.to_string());
        }
        let z = self.0.to_complex();
        let powers: Vec<(usize, String)> = self
            .0
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
            .map(|(i, c)| (i, c.to_string()))
            .collect();
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("re", &z.re)?;
        m.serialize_entry("im", &z.im)?;
        m.serialize_entry("root_order", &self.0.order())?;
        m.serialize_entry("powers", &powers)?;
        m.end()
    }
}

impl Serialize for ZetaSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ZetaSeries", 5)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("chi", &self.chi)?;
        st.serialize_field("k_max", &self.k_max)?;
        st.serialize_field("coeffs", &self.coeffs.iter().map(CoeffJson).collect::<Vec<_>>())?;
        st.serialize_field("tail", &self.tail.to_string())?;
        st.end()
    }
}
