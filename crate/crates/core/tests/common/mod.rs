//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use igusa::poly::Poly;

pub type Q = BigRational;

pub fn qpow(p: u64, e: i64) -> Q {
    let b = Q::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(b, e as usize)
    } else {
        Q::one() / num_traits::pow(b, (-e) as usize)
    }
}

pub fn corpus() -> Vec<Poly> {
    [
        "(y^3-x^2)^2+x^4*y^4",
        "y^2-x^3",
        "(y-x)^2+x^3",
        "x*y+x^3",
        "x",
        "x*y",
        "x^2+y^2",
        "y^2-x^5+3*x^2*y",
        "9*x+y^3",
        "x^2*y^2-3*x^3+y^4",
        "1+x",
        "x^3+y^3+x*y*3",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect()
}

/// `v_p(n)` for `n ≠ 0`.
pub fn val(n: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

/// Level-set measures by enumerating `(Z/p^L)²`, `L = K + c`. Columns follow the
/// ascending units mod `p^c`; the second value is the measure of `v(f) > K`.
pub fn naive_level_sets(f: &Poly, p: u64, k_max: u32, c: u32) -> (Vec<Vec<Q>>, Q) {
    let l = k_max + c;
    let n = p.pow(l);
    let modulus = BigInt::from(n);
    let pc = p.pow(c);
    let units: Vec<u64> = (1..pc).filter(|u| u % p != 0).collect();
    let mut mu = vec![vec![Q::zero(); units.len()]; k_max as usize + 1];
    let mut tail = Q::zero();
    let cell = qpow(p, -2 * l as i64);
    for x in 0..n {
        for y in 0..n {
            let v = f.eval(&BigInt::from(x), &BigInt::from(y)).mod_floor(&modulus);
            if v.is_zero() {
                tail += &cell;
                continue;
            }
            let k = val(&v, p);
            if k > k_max {
                tail += &cell;
                continue;
            }
            let ac = (&v / BigInt::from(p).pow(k)).mod_floor(&BigInt::from(pc)).to_u64().unwrap();
            let i = units.binary_search(&ac).unwrap();
            mu[k as usize][i] += &cell;
        }
    }
    (mu, tail)
}

/// `Σ_x χ(ac x)^N |x|^{n−1} t^{v(x) N}` over `x ∈ a + p^e Z` mod `p^{K+2}`, as
/// complex coefficients; `chi(u)` evaluates `χ` on units.
pub fn naive_onevar(
    a: &BigInt,
    e: u32,
    n: u32,
    big_n: u32,
    p: u64,
    k_max: usize,
    chi: impl Fn(u64) -> Complex64,
) -> Vec<Complex64> {
    let prec = k_max as u32 + 2;
    let modulus = BigInt::from(p).pow(prec);
    let step = BigInt::from(p).pow(e);
    let count = p.pow(prec - e);
    let mut out = vec![Complex64::zero(); k_max + 1];
    let cell = (p as f64).powi(-(prec as i32));
    for z in 0..count {
        let x = (a + &step * BigInt::from(z)).mod_floor(&modulus);
        if x.is_zero() {
            continue;
        }
        let v = val(&x, p);
        let deg = (v * big_n) as usize;
        if deg > k_max {
            continue;
        }
        let ac = (&x / BigInt::from(p).pow(v)).mod_floor(&BigInt::from(p).pow(2)).to_u64().unwrap();
        let w = cell * (p as f64).powi(-((v * (n - 1)) as i32));
        out[deg] += chi(ac).powu(big_n) * w;
    }
    out
}

/// `p^{-2m} Σ exp(2πi u f(x, y) / p^m)` by a plain double loop.
pub fn naive_exp_sum(f: &Poly, p: u64, m: u32, u: u64) -> Complex64 {
    let n = p.pow(m);
    let modulus = BigInt::from(n);
    let mut acc = Complex64::zero();
    for x in 0..n {
        for y in 0..n {
            let v = f.eval(&BigInt::from(x), &BigInt::from(y)).mod_floor(&modulus).to_u64().unwrap();
            acc += Complex64::from_polar(1.0, TAU * ((u * v) % n) as f64 / n as f64);
        }
    }
    acc / (n * n) as f64
}

/// Zeros of `h` on `(F_p^×)²`.
pub fn torus_zeros(h: &Poly, p: u64) -> u64 {
    let mut count = 0;
    for x in 1..p {
        for y in 1..p {
            if h.eval(&BigInt::from(x), &BigInt::from(y)).mod_floor(&BigInt::from(p)).is_zero() {
                count += 1;
            }
        }
    }
    count
}

/// Power series of `Σ_j c_j t^{b_j} / Π (1 − q^{−A} t^B)` by repeated
/// multiplication with geometric series.
pub fn geometric_product(q: u64, num: &[(i64, usize, Q)], den: &[(u64, u64)], k_max: usize) -> Vec<Q> {
    let mut s = vec![Q::zero(); k_max + 1];
    for (a, b, c) in num {
        if *b <= k_max {
            s[*b] += c * qpow(q, -a);
        }
    }
    for &(a, b) in den {
        let r = qpow(q, -(a as i64));
        let b = b as usize;
        for k in b..=k_max {
            let prev = s[k - b].clone();
            s[k] += &r * prev;
        }
    }
    s
}
