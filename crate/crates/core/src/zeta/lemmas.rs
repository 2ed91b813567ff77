use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::ratfun::{DenFactor, RationalFunctionT};
use crate::cyclotomic::CycloElem;
use crate::frac::{qi, qpow, serde_q, Q};
use crate::padic::{valuation_and_ac, Character, PadicError};
use crate::poly::{ModPoly, Poly};

/// `∫_{a + p^e Z_p} χ(ac x)^N |x|^{sN + n − 1} |dx|` as `A_0..A_K` in `t = p^{-s}`.
pub fn igusa_onevar_integral(
    a: &BigInt,
    e: u32,
    n: u32,
    big_n: u32,
    chi: &Character,
    k_max: usize,
) -> Result<Vec<CycloElem>, PadicError> {
    assert!(n >= 1 && big_n >= 1, "n and N must be positive");
    let p = chi.p;
    let ord = chi.order_of_values() as usize;
    let mut out = vec![CycloElem::zero(ord); k_max + 1];
    let chi_n = Character::new(p, chi.conductor, chi.k * big_n as u64)?;
    let (v, _) = if a.is_zero() { (u32::MAX, 0) } else { valuation_and_ac(a, p, chi.conductor)? };
    if v >= e {
        if !chi_n.is_trivial() {
            return Ok(out);
        }
        // (1 − q⁻¹) q^{−en} t^{eN} / (1 − q^{−n} t^N)
        let lead = (Q::one() - qpow(p, -1)) * qpow(p, -((e * n) as i64));
        let mut j = 0usize;
        loop {
            let deg = (e as usize + j) * big_n as usize;
            if deg > k_max {
                break;
            }
            out[deg].add_term(0, &(&lead * qpow(p, -((j as u32 * n) as i64))));
            j += 1;
        }
        return Ok(out);
    }
    let conductor_n = if chi_n.is_trivial() { 0 } else { chi_n.conductor };
    if conductor_n > e - v {
        return Ok(out);
    }
    let deg = v as usize * big_n as usize;
    if deg <= k_max {
        let (_, u) = valuation_and_ac(a, p, chi.conductor)?;
        let idx = chi.eval_root(u)?.idx * big_n as u64;
        out[deg].add_term(idx, &qpow(p, -((e + v * (n - 1)) as i64)));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitSquareData {
    /// Zeros of `h̄` on `(F_p^×)²`.
    pub n_h: u64,
    /// `M_h` for the trivial character.
    pub m_h: Option<RationalFunctionT>,
    /// `Σ_{h̄ ≠ 0} χ(h̄)` over the torus for nontrivial `χ` of conductor 1.
    #[serde(skip)]
    pub sigma_h: Option<CycloElem>,
}

/// Torus data of `Σ_{(x̄0, ȳ0)} ∫_{Z_p} χ(ac(h(x0, y0) + p z)) |h(x0, y0) + p z|^s |dz|`.
pub fn unit_square_data(h: &Poly, chi: &Character) -> Result<UnitSquareData, PadicError> {
    let p = chi.p;
    let hb = h.reduce_mod_p(p);
    let mut n_h = 0u64;
    let mut sigma = CycloElem::zero(chi.order_of_values() as usize);
    for x in 1..p {
        for y in 1..p {
            let v = hb.eval(x, y);
            if v == 0 {
                n_h += 1;
            } else if !chi.is_trivial() && !chi.wild() {
                sigma.add_term(chi.eval_root(v)?.idx, &Q::one());
            }
        }
    }
    let m_h = chi.is_trivial().then(|| {
        // [((q−1)² − N)(1 − q⁻¹t) + (1 − q⁻¹) N t] / (1 − q⁻¹t)
        let qm1 = qpow(p, -1);
        let c0 = qi((p - 1) * (p - 1)) - qi(n_h);
        let c1 = (Q::one() - &qm1) * qi(n_h) - &c0 * &qm1;
        RationalFunctionT::new(p, vec![c0, c1], vec![DenFactor { a: 1, b: 1, m: 1 }])
    });
    let sigma_h = (!chi.is_trivial()).then_some(sigma);
    Ok(UnitSquareData { n_h, m_h, sigma_h })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpfData {
    #[serde(skip)]
    pub nu: CycloElem,
    #[serde(with = "serde_q")]
    pub sigma: Q,
    /// Singular points of `f̄` in `T̄`, as residues mod `p`.
    pub singular: Vec<(u64, u64)>,
}

/// `ν_T`, `σ_T` and `S_T` for `T̄ = region` (all of `F_p²` when `None`).
pub fn spf_data(f: &Poly, chi: &Character, region: Option<&[(u64, u64)]>) -> Result<SpfData, PadicError> {
    let p = chi.p;
    let fb: ModPoly = f.reduce_mod_p(p);
    let all: Vec<(u64, u64)>;
    let cells = match region {
        Some(r) => r,
        None => {
            all = (0..p).flat_map(|x| (0..p).map(move |y| (x, y))).collect();
            &all
        }
    };
    let mut nonzero = 0u64;
    let mut smooth_roots = 0u64;
    let mut singular = Vec::new();
    for &(x, y) in cells {
        if fb.eval(x, y) != 0 {
            nonzero += 1;
        } else if fb.is_singular_zero(x, y) {
            singular.push((x, y));
        } else {
            smooth_roots += 1;
        }
    }
    let q2 = qpow(p, -2);
    let ord = chi.order_of_values() as usize;
    let mut nu = CycloElem::zero(ord);
    if chi.is_trivial() {
        nu.add_term(0, &(qi(nonzero) * &q2));
    } else {
        let c = chi.conductor;
        let m = p.pow(c);
        let w = qpow(p, -2 * c as i64);
        let mb = BigInt::from(m);
        for &(x0, y0) in cells {
            if fb.eval(x0, y0) == 0 {
                continue;
            }
            for i in 0..m / p {
                for j in 0..m / p {
                    let (x, y) = (BigInt::from(x0 + i * p), BigInt::from(y0 + j * p));
                    let val = f.eval(&x, &y);
                    let r: u64 = num_integer::Integer::mod_floor(&val, &mb).try_into().expect("residue");
                    nu.add_term(chi.eval_root(r)?.idx, &w);
                }
            }
        }
    }
    let sigma = if chi.is_trivial() { qi(smooth_roots) * q2 } else { Q::zero() };
    Ok(SpfData { nu, sigma, singular })
}
