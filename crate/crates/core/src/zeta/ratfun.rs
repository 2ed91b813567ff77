use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::frac::{qpow, serde_q_vec, Q};

/// `(1 − q^{−a} t^b)^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(u64, u64, u32)", into = "(u64, u64, u32)")]
pub struct DenFactor {
    pub a: u64,
    pub b: u64,
    pub m: u32,
}

impl From<(u64, u64, u32)> for DenFactor {
    fn from((a, b, m): (u64, u64, u32)) -> Self {
        DenFactor { a, b, m }
    }
}

impl From<DenFactor> for (u64, u64, u32) {
    fn from(f: DenFactor) -> Self {
        (f.a, f.b, f.m)
    }
}

/// Numerator polynomial in `t = q^{−s}` over a factored denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionT {
    pub q: u64,
    #[serde(with = "serde_q_vec")]
    pub numerator: Vec<Q>,
    pub factors: Vec<DenFactor>,
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn trim(mut v: Vec<Q>) -> Vec<Q> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// `1 − q^{−a} t^b` expanded.
fn binomial_factor(q: u64, a: u64, b: u64) -> Vec<Q> {
    let mut v = vec![Q::zero(); b as usize + 1];
    v[0] = Q::one();
    v[b as usize] -= qpow(q, -(a as i64));
    v
}

/// `q^{-a} t^b` as a polynomial.
pub fn monomial(q: u64, a: i64, b: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); b + 1];
    v[b] = qpow(q, -a);
    v
}

impl RationalFunctionT {
    pub fn new(q: u64, numerator: Vec<Q>, factors: Vec<DenFactor>) -> Self {
        let mut rf = RationalFunctionT { q, numerator: trim(numerator), factors: Vec::new() };
        for f in factors {
            rf.push_factor(f);
        }
        rf
    }

    pub fn polynomial(q: u64, numerator: Vec<Q>) -> Self {
        Self::new(q, numerator, Vec::new())
    }

    pub fn zero(q: u64) -> Self {
        Self::polynomial(q, Vec::new())
    }

    fn push_factor(&mut self, f: DenFactor) {
        if f.m == 0 {
            return;
        }
        match self.factors.iter_mut().find(|g| (g.a, g.b) == (f.a, f.b)) {
            Some(g) => g.m += f.m,
            None => self.factors.push(f),
        }
        self.factors.sort();
    }

    pub fn multiplicity(&self, a: u64, b: u64) -> u32 {
        self.factors.iter().find(|f| (f.a, f.b) == (a, b)).map_or(0, |f| f.m)
    }

    pub fn denominator_degree(&self) -> usize {
        self.factors.iter().map(|f| (f.b * f.m as u64) as usize).sum()
    }

    pub fn expanded_denominator(&self) -> Vec<Q> {
        let mut d = vec![Q::one()];
        for f in &self.factors {
            let bf = binomial_factor(self.q, f.a, f.b);
            for _ in 0..f.m {
                d = poly_mul(&d, &bf);
            }
        }
        d
    }

    /// Power-series coefficients of `t^0..=t^K`.
    pub fn series(&self, k_max: usize) -> Vec<Q> {
        let den = self.expanded_denominator();
        let mut out: Vec<Q> = Vec::with_capacity(k_max + 1);
        for n in 0..=k_max {
            let mut c = self.numerator.get(n).cloned().unwrap_or_else(Q::zero);
            for i in 1..den.len().min(n + 1) {
                if !den[i].is_zero() {
                    c -= &den[i] * &out[n - i];
                }
            }
            out.push(c / &den[0]);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        RationalFunctionT { numerator: trim(self.numerator.iter().map(|x| x * c).collect()), ..self.clone() }
    }

    /// Multiplies the numerator by `q^{-a} t^b`.
    pub fn shift(&self, a: i64, b: usize) -> Self {
        RationalFunctionT { numerator: poly_mul(&self.numerator, &monomial(self.q, a, b)), ..self.clone() }
    }

    /// Sum over the least common factored denominator.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.q, other.q, "mixing different q");
        let mut common = self.clone();
        for f in &other.factors {
            let have = common.multiplicity(f.a, f.b);
            if f.m > have {
                common.push_factor(DenFactor { m: f.m - have, ..*f });
            }
        }
        let lift = |x: &Self| -> Vec<Q> {
            let mut num = x.numerator.clone();
            for f in &common.factors {
                let missing = f.m - x.multiplicity(f.a, f.b);
                let bf = binomial_factor(x.q, f.a, f.b);
                for _ in 0..missing {
                    num = poly_mul(&num, &bf);
                }
            }
            num
        };
        let numerator = trim(poly_add(&lift(self), &lift(other)));
        RationalFunctionT { q: self.q, numerator, factors: common.factors }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// Divides out denominator factors that also divide the numerator.
    pub fn cancel_common_factors(&self) -> Self {
        let mut out = self.clone();
        let mut k = 0;
        while k < out.factors.len() {
            let f = out.factors[k];
            let bf = binomial_factor(out.q, f.a, f.b);
            match exact_div(&out.numerator, &bf) {
                Some(qt) if !out.numerator.is_empty() => {
                    out.numerator = qt;
                    out.factors[k].m -= 1;
                    if out.factors[k].m == 0 {
                        out.factors.remove(k);
                    }
                }
                _ => k += 1,
            }
        }
        out
    }

    /// Real parts `−a/b` of the denominator factors, descending, deduplicated.
    pub fn pole_real_parts(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.factors.iter().map(|f| -Q::new(f.a.into(), f.b.into())).collect();
        v.sort();
        v.dedup();
        v.reverse();
        v
    }
}

/// `num / den` when the division is exact.
fn exact_div(num: &[Q], den: &[Q]) -> Option<Vec<Q>> {
    let den = trim(den.to_vec());
    let dd = den.len() - 1;
    let mut rem = trim(num.to_vec());
    if rem.len() < den.len() {
        return rem.is_empty().then(Vec::new);
    }
    let mut quot = vec![Q::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &den[dd];
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then(|| trim(quot))
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .numerator
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            })
            .collect();
        let num = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        if self.factors.is_empty() {
            return write!(f, "{num}");
        }
        let q = self.q;
        let den: Vec<String> = self
            .factors
            .iter()
            .map(|g| {
                let base = format!("(1 - {q}^-{}·t^{})", g.a, g.b);
                if g.m == 1 {
                    base
                } else {
                    format!("{base}^{}", g.m)
                }
            })
            .collect();
        write!(f, "[{num}] / {}", den.join(""))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::{q, qi};

    #[test]
    fn geometric_series() {
        let rf = RationalFunctionT::new(5, vec![q(4, 5)], vec![DenFactor { a: 1, b: 1, m: 1 }]);
        assert_eq!(rf.series(3), vec![q(4, 5), q(4, 25), q(4, 125), q(4, 625)]);
    }

    #[test]
    fn even_powers() {
        let rf = RationalFunctionT::new(1, vec![qi(1)], vec![DenFactor { a: 0, b: 2, m: 1 }]);
        assert_eq!(rf.series(5), vec![qi(1), qi(0), qi(1), qi(0), qi(1), qi(0)]);
    }

    #[test]
    fn add_and_cancel() {
        let a = RationalFunctionT::new(3, vec![qi(1)], vec![DenFactor { a: 1, b: 1, m: 1 }]);
        let b = RationalFunctionT::new(3, vec![qi(2)], vec![DenFactor { a: 5, b: 6, m: 1 }]);
        let s = a.add(&b);
        let direct: Vec<Q> = a.series(12).iter().zip(b.series(12)).map(|(x, y)| x + y).collect();
        assert_eq!(s.series(12), direct);
        assert_eq!(s.denominator_degree(), 7);

        // (1 - t/3)/(1 - t/3)^2 cancels to 1/(1 - t/3)
        let c = RationalFunctionT::new(3, vec![qi(1), q(-1, 3)], vec![DenFactor { a: 1, b: 1, m: 2 }]);
        let cc = c.cancel_common_factors();
        assert_eq!(cc.factors, vec![DenFactor { a: 1, b: 1, m: 1 }]);
        assert_eq!(cc.numerator, vec![qi(1)]);
        assert_eq!(cc.series(8), c.series(8));
        assert_eq!(a.sub(&a).numerator, Vec::<Q>::new());
    }

    #[test]
    fn json_shape() {
        let rf = RationalFunctionT::new(5, vec![q(4, 5)], vec![DenFactor { a: 9, b: 20, m: 1 }]);
        let js = serde_json::to_string(&rf).unwrap();
        assert_eq!(js, r#"{"q":5,"numerator":["4/5"],"factors":[[9,20,1]]}"#);
        let back: RationalFunctionT = serde_json::from_str(&js).unwrap();
        assert_eq!(back, rf);
    }
}
