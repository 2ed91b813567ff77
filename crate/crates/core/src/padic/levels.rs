//! Exact Haar measures of `{v(f) = k, ac(f) ≡ u mod p^c}` on `Z_p²`.
//!
//! A cell is `(x0, y0) + p^ℓ Z_p²`, of measure `p^{-2ℓ}`. Writing
//! `f(x0 + p^ℓ s, y0 + p^ℓ t) = Σ b_α p^{ℓ|α|} s^α₁ t^α₂`, let
//! `ν_α = v(b_α) + ℓ|α|`, `ν0 = ν_(0,0)` and `m1 = min_{α≠0} ν_α`.
//!
//! [`Resolution::Taylor`] closes a cell when
//! * `ν0 < m1` and `ν0 + c ≤ m1`: valuation and angular component are constant;
//! * `ν0 > K` and (`ν0 < m1` or `m1 > K`): the whole cell has `v(f) > K`;
//! * `ν_(0,1) = m1 = M` and every other `α` with `α₂ ≥ 1` has `ν_α > M` (or the
//!   same with the roles of `x` and `y` swapped): then `f` is equidistributed on
//!   `b_0 + p^M Z_p` over the cell, so its level sets are known in closed form.
//!
//! Everything else is split into `p²` children. Every cell closes by depth
//! `K + c`.
//!
//! [`Resolution::Basic`] closes a cell only when `v(f(x0, y0)) + c ≤ ℓ` and sends
//! cells still open at depth `K + c` to the tail.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{is_prime, valuation_capped, PadicError};
use crate::frac::{qi, qpow, serde_q, Q};
use crate::poly::{Monomial, Poly};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    #[default]
    Taylor,
    Basic,
}

#[derive(Clone, Debug)]
pub struct MeasureOptions {
    pub resolution: Resolution,
    /// Upper bound on visited cells.
    pub cell_budget: u64,
    /// Integrate only over these residue classes mod p (all of `Z_p²` when `None`).
    pub restrict_to: Option<Vec<(u64, u64)>>,
    /// Worker count; the global rayon pool when `None`.
    pub threads: Option<usize>,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions { resolution: Resolution::Taylor, cell_budget: 100_000_000, restrict_to: None, threads: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStats {
    pub visited: u64,
    pub max_depth: u32,
    pub refined: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSetTable {
    pub p: u64,
    pub c: u32,
    pub k_max: u32,
    /// Units mod `p^c`, ascending; column order of `mu`.
    pub units: Vec<u64>,
    #[serde(with = "serde_q_mat")]
    pub mu: Vec<Vec<Q>>,
    /// Measure of `{v(f) > K}` plus anything left unresolved.
    #[serde(with = "serde_q")]
    pub tail: Q,
    #[serde(with = "serde_q")]
    pub tail_unresolved: Q,
    /// Measure of the integration domain.
    #[serde(with = "serde_q")]
    pub region: Q,
    pub stats: CellStats,
    pub warnings: Vec<String>,
}

mod serde_q_mat {
    use super::Q;
    use crate::frac::parse_q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|row| row.iter().map(|s| parse_q(s).ok_or_else(|| serde::de::Error::custom("bad fraction"))).collect())
            .collect()
    }
}

impl LevelSetTable {
    pub fn unit_index(&self, u: u64) -> Option<usize> {
        self.units.binary_search(&(u % self.p.pow(self.c))).ok()
    }

    pub fn mu_at(&self, k: u32, u: u64) -> Q {
        match (self.mu.get(k as usize), self.unit_index(u)) {
            (Some(row), Some(i)) => row[i].clone(),
            _ => Q::zero(),
        }
    }

    /// `Σ_u μ[k][u]`.
    pub fn level_total(&self, k: u32) -> Q {
        self.mu[k as usize].iter().sum()
    }

    /// `Σ μ + tail`; equals `region`.
    pub fn total(&self) -> Q {
        self.mu.iter().flatten().sum::<Q>() + &self.tail
    }
}

/// Key `(k, d, r, e)`: every unit `u ≡ r mod p^d` at level `k` gains `p^{-e}`.
type ClassKey = (u32, u32, u64, u32);

#[derive(Default)]
struct Acc {
    class: HashMap<ClassKey, u64>,
    tail: HashMap<u32, u64>,
    tail_unresolved: HashMap<u32, u64>,
    children: Vec<(u128, u128)>,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        for (k, v) in other.class {
            *self.class.entry(k).or_default() += v;
        }
        for (k, v) in other.tail {
            *self.tail.entry(k).or_default() += v;
        }
        for (k, v) in other.tail_unresolved {
            *self.tail_unresolved.entry(k).or_default() += v;
        }
        self.children.extend(other.children);
        self
    }
}

struct Ctx<'a> {
    p: u64,
    pb: BigInt,
    k_max: u32,
    c: u32,
    cap: u32,
    resolution: Resolution,
    /// Taylor coefficient polynomials, `(0,0)` first.
    taylor: &'a [(Monomial, Poly)],
    max_i: usize,
    max_j: usize,
}

fn eval_with_powers(f: &Poly, xp: &[BigInt], yp: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for ((i, j), c) in f.terms() {
        acc += c * &xp[i as usize] * &yp[j as usize];
    }
    acc
}

fn powers(x: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::from(1));
    for k in 0..n {
        let next = &out[k] * x;
        out.push(next);
    }
    out
}

impl Ctx<'_> {
    fn ac(&self, b: &BigInt, v: u32, digits: u32) -> u64 {
        let m = self.pb.pow(digits);
        let w = b / self.pb.pow(v);
        w.mod_floor(&m).to_u64().expect("residue fits")
    }

    fn visit(&self, depth: u32, x0: u128, y0: u128, acc: &mut Acc) {
        let (k_max, c, cap) = (self.k_max, self.c, self.cap);
        let mass = 2 * depth;
        let xp = powers(&BigInt::from(x0), self.max_i);
        let yp = powers(&BigInt::from(y0), self.max_j);
        let b0 = eval_with_powers(&self.taylor[0].1, &xp, &yp);
        let nu0 = valuation_capped(&b0, self.p, cap);

        if self.resolution == Resolution::Basic {
            if nu0 + c <= depth {
                if nu0 <= k_max {
                    let u = self.ac(&b0, nu0, c);
                    *acc.class.entry((nu0, c, u, mass)).or_default() += 1;
                } else {
                    *acc.tail.entry(mass).or_default() += 1;
                }
            } else if depth >= k_max + c {
                *acc.tail_unresolved.entry(mass).or_default() += 1;
            } else {
                self.split(depth, x0, y0, acc);
            }
            return;
        }

        let mut nus: Vec<(Monomial, u32)> = Vec::with_capacity(self.taylor.len());
        let mut m1 = cap;
        for ((a, b), poly) in &self.taylor[1..] {
            let shift = depth * (a + b);
            let nu = if shift >= cap {
                cap
            } else {
                let v = eval_with_powers(poly, &xp, &yp);
                shift + valuation_capped(&v, self.p, cap - shift)
            };
            m1 = m1.min(nu);
            nus.push(((*a, *b), nu));
        }

        if nu0 > k_max && (nu0 < m1 || m1 > k_max) {
            *acc.tail.entry(mass).or_default() += 1;
            return;
        }
        if nu0 < m1 && nu0 + c <= m1 {
            let u = self.ac(&b0, nu0, c);
            *acc.class.entry((nu0, c, u, mass)).or_default() += 1;
            return;
        }
        let m = m1;
        let isolated = |lin: Monomial, uses: fn(Monomial) -> bool| {
            nus.iter().any(|(al, nu)| *al == lin && *nu == m)
                && nus.iter().all(|(al, nu)| *al == lin || !uses(*al) || *nu > m)
        };
        if m < cap && (isolated((0, 1), |a| a.1 >= 1) || isolated((1, 0), |a| a.0 >= 1)) {
            if nu0 >= m {
                for k in m..=k_max {
                    *acc.class.entry((k, 0, 0, mass + (k - m) + c)).or_default() += 1;
                }
                *acc.tail.entry(mass + (k_max + 1 - m)).or_default() += 1;
            } else {
                let d = m - nu0;
                let r = self.ac(&b0, nu0, d);
                *acc.class.entry((nu0, d, r, mass + c - d)).or_default() += 1;
            }
            return;
        }
        debug_assert!(depth < k_max + c, "every cell closes by depth K + c");
        if depth >= k_max + c {
            *acc.tail_unresolved.entry(mass).or_default() += 1;
            return;
        }
        self.split(depth, x0, y0, acc);
    }

    fn split(&self, depth: u32, x0: u128, y0: u128, acc: &mut Acc) {
        let step = (self.p as u128).pow(depth);
        for i in 0..self.p as u128 {
            for j in 0..self.p as u128 {
                acc.children.push((x0 + i * step, y0 + j * step));
            }
        }
    }
}

pub fn measure_level_sets(
    f: &Poly,
    p: u64,
    k_max: u32,
    c: u32,
    opts: &MeasureOptions,
) -> Result<LevelSetTable, PadicError> {
    if !is_prime(p) {
        return Err(PadicError::NotPrime { p });
    }
    assert!(c >= 1, "angular depth must be at least 1");
    let max_depth = k_max + c;
    if (p as u128).checked_pow(max_depth + 1).is_none_or(|v| v > u128::MAX / (p as u128)) {
        return Err(PadicError::PrecisionTooLarge { p, exp: max_depth });
    }
    let pc = p.checked_pow(c).filter(|v| *v <= 1 << 24).ok_or(PadicError::PrecisionTooLarge { p, exp: c })?;
    match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| run(f, p, k_max, c, pc, opts)),
        None => run(f, p, k_max, c, pc, opts),
    }
}

fn run(f: &Poly, p: u64, k_max: u32, c: u32, pc: u64, opts: &MeasureOptions) -> Result<LevelSetTable, PadicError> {
    let mut warnings = Vec::new();
    if f.reduce_mod_p(p).is_zero() {
        warnings.push(format!("f vanishes identically mod {p}"));
    }
    let mut taylor = f.taylor_polys();
    if taylor.first().is_none_or(|(a, _)| *a != (0, 0)) {
        taylor.insert(0, ((0, 0), Poly::zero()));
    }
    taylor[1..].sort_by_key(|((a, b), _)| (a + b, *a));
    let ctx = Ctx {
        p,
        pb: BigInt::from(p),
        k_max,
        c,
        cap: k_max + c + 1,
        resolution: opts.resolution,
        taylor: &taylor,
        max_i: f.degree_x() as usize,
        max_j: f.degree_y() as usize,
    };

    let (mut depth, mut frontier, region) = match &opts.restrict_to {
        None => (0u32, vec![(0u128, 0u128)], qi(1)),
        Some(cells) => {
            let mut cells: Vec<(u128, u128)> = cells.iter().map(|(x, y)| ((x % p) as u128, (y % p) as u128)).collect();
            cells.sort();
            cells.dedup();
            let region = Q::new(cells.len().into(), (p * p).into());
            (1u32, cells, region)
        }
    };

    let mut total = Acc::default();
    let mut stats = CellStats::default();
    while !frontier.is_empty() {
        stats.visited += frontier.len() as u64;
        stats.max_depth = depth;
        if stats.visited > opts.cell_budget {
            return Err(PadicError::CellBudget { budget: opts.cell_budget });
        }
        let mut level = frontier
            .par_iter()
            .fold(Acc::default, |mut acc, &(x0, y0)| {
                ctx.visit(depth, x0, y0, &mut acc);
                acc
            })
            .reduce(Acc::default, Acc::merge);
        stats.refined += level.children.len() as u64 / (p * p);
        frontier = std::mem::take(&mut level.children);
        total = total.merge(level);
        depth += 1;
    }

    let units: Vec<u64> = (1..pc).filter(|u| u % p != 0).collect();
    let mut mu = vec![vec![Q::zero(); units.len()]; k_max as usize + 1];
    let mut keys: Vec<_> = total.class.into_iter().collect();
    keys.sort();
    for ((k, d, r, e), count) in keys {
        let w = qi(count) * qpow(p, -(e as i64));
        let md = p.pow(d);
        for (idx, u) in units.iter().enumerate() {
            if u % md == r % md {
                mu[k as usize][idx] += &w;
            }
        }
    }
    let sum_tail = |m: &HashMap<u32, u64>| -> Q { m.iter().map(|(e, n)| qi(*n) * qpow(p, -(*e as i64))).sum() };
    let tail_unresolved = sum_tail(&total.tail_unresolved);
    let tail = sum_tail(&total.tail) + &tail_unresolved;

    Ok(LevelSetTable { p, c, k_max, units, mu, tail, tail_unresolved, region, stats, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::q;
    use crate::poly::parse_poly;

    fn run_both(f: &str, p: u64, k: u32, c: u32) -> (LevelSetTable, LevelSetTable) {
        let f = parse_poly(f).unwrap();
        let t = measure_level_sets(&f, p, k, c, &MeasureOptions::default()).unwrap();
        let b =
            measure_level_sets(&f, p, k, c, &MeasureOptions { resolution: Resolution::Basic, ..Default::default() })
                .unwrap();
        (t, b)
    }

    #[test]
    fn linear_form() {
        let (t, b) = run_both("x", 3, 2, 1);
        for tab in [&t, &b] {
            for k in 0..=2 {
                for u in [1, 2] {
                    assert_eq!(tab.mu_at(k, u), qpow(3, -(k as i64) - 1));
                }
            }
            assert_eq!(tab.tail, q(1, 27));
            assert_eq!(tab.total(), qi(1));
        }
    }

    #[test]
    fn product() {
        let (t, b) = run_both("x*y", 3, 1, 1);
        assert_eq!(t.mu, b.mu);
        assert_eq!(t.mu_at(0, 1), q(2, 9));
        assert_eq!(t.mu_at(0, 2), q(2, 9));
        // v(x)+v(y) = 1: two ways, each (2/3)(2/9) split over two angular classes
        assert_eq!(t.level_total(1), q(8, 27));
    }

    #[test]
    fn example_level_zero_counts_residues() {
        let f = parse_poly("(y^3-x^2)^2+x^4*y^4").unwrap();
        let t = measure_level_sets(&f, 5, 0, 1, &MeasureOptions::default()).unwrap();
        let fm = f.reduce_mod_p(5);
        for u in 1..5u64 {
            let n = (0..5).flat_map(|x| (0..5).map(move |y| (x, y))).filter(|&(x, y)| fm.eval(x, y) == u).count();
            assert_eq!(t.mu_at(0, u), q(n as i64, 25));
        }
    }

    #[test]
    fn restricted_region() {
        let f = parse_poly("y^2-x^3").unwrap();
        let torus: Vec<(u64, u64)> = (1..3).flat_map(|x| (1..3).map(move |y| (x, y))).collect();
        let t = measure_level_sets(&f, 3, 4, 1, &MeasureOptions { restrict_to: Some(torus), ..Default::default() })
            .unwrap();
        assert_eq!(t.region, q(4, 9));
        assert_eq!(t.total(), q(4, 9));
    }

    #[test]
    fn thread_count_invariant() {
        let f = parse_poly("(y^3-x^2)^2+x^4*y^4").unwrap();
        let one = measure_level_sets(&f, 3, 6, 2, &MeasureOptions { threads: Some(1), ..Default::default() }).unwrap();
        let four = measure_level_sets(&f, 3, 6, 2, &MeasureOptions { threads: Some(4), ..Default::default() }).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn budget_is_enforced() {
        let f = parse_poly("(y^3-x^2)^2+x^4*y^4").unwrap();
        let r = measure_level_sets(&f, 5, 6, 1, &MeasureOptions { cell_budget: 10, ..Default::default() });
        assert_eq!(r, Err(PadicError::CellBudget { budget: 10 }));
    }
}
