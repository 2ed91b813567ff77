//! Closed forms of the running example `(y³−x²)² + x⁴y⁴`, stored as data.
//!
//! Each display is a list of simple fractions `c · q^{-a} t^b / Π(1 − q^{−A} t^B)`
//! with `c` a polynomial in `q^{-1}`; [`golden_example_forms`] sums them over a
//! common factored denominator.
//!
//! How the displays combine for a given character, established against the
//! level-set oracle at `p = 5` through `t^19`:
//! * trivial `χ`: the display for the trivial case plus the torus integral
//!   `q^{-2}·M_f` (see [`crate::zeta::unit_square_data`]);
//! * nontrivial `χ` trivial on `1 + pZ_p`: the sum of every display whose
//!   condition `χ^n = χ_triv` holds, plus the torus term
//!   `q^{-2}·Σ_{(F_q^×)², f̄ ≠ 0} χ(f̄)`. The factor `χ̄⁴(ȳ0)χ̄²(ȳ0−1)` of the
//!   `chi12` display is read as its average over `ȳ0 ∉ {0, 1}`, so that
//!   `χ̄⁴(ȳ0)χ̄²(ȳ0−1)(q−2)` becomes `Σ_{ȳ0 ≠ 0, 1} χ̄⁴(ȳ0)χ̄²(ȳ0−1)`.
//!
//! [`golden_character_series`] applies this rule.
//!
//! At `t^20` the oracle exceeds all of these by `q^{-11}·Σ_{(F_q^×)²} χ(ȳ² + x̄⁸)`.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::lemmas::unit_square_data;
use super::ratfun::{DenFactor, RationalFunctionT};
use crate::cyclotomic::CycloElem;
use crate::frac::{qi, qpow, Q};
use crate::padic::{Character, PadicError};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoldenCase {
    Triv,
    Chi2,
    Chi4,
    Chi6,
    Chi12,
    Chi20,
}

impl GoldenCase {
    pub const ALL: [GoldenCase; 6] =
        [GoldenCase::Triv, GoldenCase::Chi2, GoldenCase::Chi4, GoldenCase::Chi6, GoldenCase::Chi12, GoldenCase::Chi20];

    /// `n` in the condition `χ^n = χ_triv`; `None` for the trivial case.
    pub fn order(self) -> Option<u64> {
        match self {
            GoldenCase::Triv => None,
            GoldenCase::Chi2 => Some(2),
            GoldenCase::Chi4 => Some(4),
            GoldenCase::Chi6 => Some(6),
            GoldenCase::Chi12 => Some(12),
            GoldenCase::Chi20 => Some(20),
        }
    }
}

impl fmt::Display for GoldenCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GoldenCase::Triv => "triv",
            GoldenCase::Chi2 => "chi2",
            GoldenCase::Chi4 => "chi4",
            GoldenCase::Chi6 => "chi6",
            GoldenCase::Chi12 => "chi12",
            GoldenCase::Chi20 => "chi20",
        };
        f.write_str(s)
    }
}

impl FromStr for GoldenCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GoldenCase::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown case {s:?} (expected triv, chi2, chi4, chi6, chi12 or chi20)"))
    }
}

/// Inputs for the displays that carry data: `N`, `T` for `triv`, the value `s`
/// standing for `χ̄⁴(ȳ0)χ̄²(ȳ0−1)` in `chi12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenParams {
    pub n: Q,
    pub t: Q,
    pub s: Q,
}

impl Default for GoldenParams {
    fn default() -> Self {
        GoldenParams { n: qi(0), t: qi(0), s: qi(1) }
    }
}

/// `coeff · q^{-a} t^b / Π (1 − q^{−A} t^B)`, `coeff` given as powers of `u = 1 − q^{-1}`.
struct Frac {
    coeff: Q,
    a: i64,
    b: usize,
    den: &'static [(u64, u64)],
}

fn term(q: u64, fr: &Frac) -> RationalFunctionT {
    let mut num = vec![Q::default(); fr.b + 1];
    num[fr.b] = &fr.coeff * qpow(q, -fr.a);
    RationalFunctionT::new(q, num, fr.den.iter().map(|&(a, b)| DenFactor { a, b, m: 1 }).collect())
}

fn sum(q: u64, fracs: &[Frac]) -> RationalFunctionT {
    fracs.iter().fold(RationalFunctionT::zero(q), |acc, fr| acc.add(&term(q, fr)))
}

pub fn golden_example_forms(q: u64, case: GoldenCase, params: &GoldenParams) -> RationalFunctionT {
    let qq = qi(q);
    let u = Q::one() - qpow(q, -1);
    let u2 = &u * &u;
    let f = |coeff: &Q, a: i64, b: usize, den: &'static [(u64, u64)]| Frac { coeff: coeff.clone(), a, b, den };
    match case {
        GoldenCase::Triv => {
            let mut rf = sum(
                q,
                &[
                    f(&(qi(2) * &u), 1, 0, &[]),
                    f(&u, 2, 4, &[(2, 4)]),
                    f(&u2, 7, 16, &[(2, 4), (5, 12)]),
                    f(&u2, 8, 18, &[(3, 6), (5, 12)]),
                    f(&u, 3, 6, &[(3, 6)]),
                    f(&u2, 6, 14, &[(1, 2), (5, 12)]),
                    f(&-u2.clone(), 9, 20, &[(1, 2), (9, 20)]),
                    f(&((&qq - qi(2)) * &u), 6, 12, &[(5, 12)]),
                    f(&u, 10, 20, &[(9, 20)]),
                ],
            );
            // q^{-9-20s}/((1-q^{-1-s})(1-q^{-9-20s})) ·
            //   { q^{-1}(q^{-1-s} - q^{-1}) N + (1-q^{-1})^2 (1-q^{-1-s}) - q^{-2}(1-q^{-1-s}) T }
            let qm1 = qpow(q, -1);
            let qm2 = qpow(q, -2);
            let brace0 = -(&qm2 * &params.n) + &u2 - &qm2 * &params.t;
            let brace1 = &qm2 * &params.n - &u2 * &qm1 + &qm2 * &qm1 * &params.t;
            let mut num = vec![Q::default(); 22];
            num[20] = brace0 * qpow(q, -9);
            num[21] = brace1 * qpow(q, -9);
            let brace =
                RationalFunctionT::new(q, num, vec![DenFactor { a: 1, b: 1, m: 1 }, DenFactor { a: 9, b: 20, m: 1 }]);
            rf = rf.add(&brace);
            rf
        }
        GoldenCase::Chi2 => sum(q, &[f(&u2, 6, 14, &[(1, 2), (5, 12)]), f(&-u2.clone(), 9, 20, &[(1, 2), (9, 20)])]),
        GoldenCase::Chi4 => sum(
            q,
            &[f(&u, 1, 0, &[]), f(&u, 3, 4, &[(2, 4)]), f(&u2, 2, 4, &[(2, 4)]), f(&u2, 7, 16, &[(2, 4), (5, 12)])],
        ),
        GoldenCase::Chi6 => sum(
            q,
            &[f(&u2, 8, 18, &[(3, 6), (5, 12)]), f(&u2, 3, 6, &[(3, 6)]), f(&u, 4, 6, &[(3, 6)]), f(&u, 1, 0, &[])],
        ),
        GoldenCase::Chi12 => sum(q, &[f(&(&params.s * (&qq - qi(2)) * &u), 6, 12, &[(5, 12)])]),
        GoldenCase::Chi20 => sum(q, &[f(&u, 10, 20, &[(9, 20)])]),
    }
}

/// `(y³ − x²)² + x⁴y⁴`.
pub fn example_polynomial() -> Poly {
    let x = Poly::x();
    let y = Poly::y();
    (&y.pow(3) - &x.pow(2)).pow(2) + x.pow(4) * y.pow(4)
}

fn torus(p: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..p).flat_map(move |x| (1..p).map(move |y| (x, y)))
}

/// `N` and `T` of the trivial-character display, counted over `F_p`.
pub fn example_counts(p: u64) -> (u64, u64) {
    let sq_minus_one = (1..p).filter(|x| (x * x + 1) % p == 0).count() as u64;
    let t = torus(p).filter(|(x, y)| (y * y + crate::poly::powmod(*x, 8, p)) % p == 0).count() as u64;
    ((p - 1) * sq_minus_one, t)
}

/// Series `A_0..A_K` of `Z(s, f, χ)` for the example polynomial, assembled from
/// the displays by the combination rule of this module.
pub fn golden_character_series(chi: &Character, k_max: usize) -> Result<Vec<CycloElem>, PadicError> {
    let p = chi.p;
    let n = chi.order_of_values() as usize;
    let mut out = vec![CycloElem::zero(n); k_max + 1];
    let add_rational = |out: &mut Vec<CycloElem>, series: &[Q], scale: &CycloElem| {
        for (a, c) in out.iter_mut().zip(series) {
            for (idx, s) in scale.coeffs().iter().enumerate() {
                if !num_traits::Zero::is_zero(s) {
                    a.add_term(idx as u64, &(c * s));
                }
            }
        }
    };
    let one = {
        let mut e = CycloElem::zero(n);
        e.add_term(0, &Q::one());
        e
    };
    let f = example_polynomial();
    if chi.is_trivial() {
        let (nn, tt) = example_counts(p);
        let params = GoldenParams { n: qi(nn), t: qi(tt), s: Q::one() };
        let rf = golden_example_forms(p, GoldenCase::Triv, &params);
        let m_f = unit_square_data(&f, chi)?.m_h.expect("trivial character");
        let rf = rf.add(&m_f.scale(&qpow(p, -2)));
        add_rational(&mut out, &rf.series(k_max), &one);
        return Ok(out);
    }
    if chi.wild() {
        return Ok(out);
    }
    for case in GoldenCase::ALL.into_iter().skip(1) {
        if !chi.power_is_trivial(case.order().unwrap()) {
            continue;
        }
        let series = golden_example_forms(p, case, &GoldenParams::default()).series(k_max);
        let scale = if case == GoldenCase::Chi12 {
            let inv = chi.inverse();
            let mut s = CycloElem::zero(n);
            let w = Q::one() / qi(p - 2);
            for y0 in 2..p {
                let idx = 4 * inv.eval_root(y0)?.idx + 2 * inv.eval_root(y0 - 1)?.idx;
                s.add_term(idx, &w);
            }
            s
        } else {
            one.clone()
        };
        add_rational(&mut out, &series, &scale);
    }
    let sigma = unit_square_data(&f, chi)?.sigma_h.expect("conductor one");
    let q2 = qpow(p, -2);
    for (idx, c) in sigma.coeffs().iter().enumerate() {
        out[0].add_term(idx as u64, &(c * &q2));
    }
    Ok(out)
}
