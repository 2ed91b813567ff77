mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{naive_onevar, qpow, torus_zeros, Q};
use igusa::cyclotomic::CycloElem;
use igusa::padic::{enumerate_characters, measure_level_sets, Character, MeasureOptions};
use igusa::poly::Poly;
use igusa::zeta::{
    example_polynomial, fit_rational, golden_character_series, golden_example_forms, igusa_onevar_integral,
    unit_square_data, zeta_series, DenFactor, FitOptions, FitOutcome, GoldenCase, GoldenParams, RationalFunctionT,
};

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn arb_ratfun() -> impl Strategy<Value = RationalFunctionT> {
    (prop::collection::vec((-9i64..=9, 1i64..=4), 1..=3), prop::collection::vec((1u64..=6, 1u64..=4, 1u32..=2), 0..=2))
        .prop_map(|(num, den)| {
            RationalFunctionT::new(
                3,
                num.into_iter().map(|(n, d)| q(n, d)).collect(),
                den.into_iter().map(|(a, b, m)| DenFactor { a, b, m }).collect(),
            )
        })
}

#[test]
fn oracle_matches_the_combined_closed_forms() {
    let p = 5;
    let k_max = 20;
    let f = example_polynomial();
    let table = measure_level_sets(&f, p, k_max as u32, 1, &MeasureOptions::default()).unwrap();
    for chi in enumerate_characters(p, 1).unwrap() {
        let oracle = zeta_series(&table, &chi).unwrap().coeffs;
        let golden = golden_character_series(&chi, k_max).unwrap();
        for k in 0..k_max {
            assert_eq!(oracle[k].reduced(), golden[k].reduced(), "{chi}, t^{k}");
        }
        // The remaining difference at t^20 is q^{-11} Σ_{torus, h̄ ≠ 0} χ(h̄).
        let mut gap = Complex64::zero();
        for x in 1..p {
            for y in 1..p {
                let v = (y * y + x.pow(8)) % p;
                if v != 0 {
                    gap += chi.eval(v).unwrap();
                }
            }
        }
        gap *= (p as f64).powi(-11);
        let diff = oracle[k_max].to_complex() - golden[k_max].to_complex();
        assert!((diff - gap).norm() < 1e-15, "{chi}: {diff} vs {gap}");
        if chi.is_trivial() {
            let exact = oracle[k_max].as_rational().unwrap() - golden[k_max].as_rational().unwrap();
            assert_eq!(exact, q(8, 1) * qpow(5, -11));
        }
    }
}

#[test]
fn wild_characters_vanish_deeper() {
    let table = measure_level_sets(&example_polynomial(), 5, 6, 2, &MeasureOptions::default()).unwrap();
    for chi in enumerate_characters(5, 2).unwrap().into_iter().filter(Character::wild) {
        assert!(zeta_series(&table, &chi).unwrap().all_zero(), "{chi}");
        assert!(golden_character_series(&chi, 6).unwrap().iter().all(CycloElem::is_zero));
    }
}

#[test]
fn trivial_display_is_a_measure_series() {
    let params = GoldenParams { n: q(8, 1), t: q(8, 1), s: Q::one() };
    let s = golden_example_forms(5, GoldenCase::Triv, &params).series(120);
    assert!(s.iter().all(|c| *c >= Q::zero()));
    assert!(s.iter().sum::<Q>() <= Q::one());
    for case in GoldenCase::ALL {
        let rf = golden_example_forms(5, case, &GoldenParams::default());
        assert!(rf.pole_real_parts().iter().all(|v| *v < Q::zero()), "{case}");
    }
}

#[test]
fn unit_square_matches_integration() {
    for (h, p) in [("y^2+x^8", 5u64), ("x^2+1", 5), ("x+y", 3), ("x*y-1", 7), ("3", 3)] {
        let h: Poly = h.parse().unwrap();
        let d = unit_square_data(&h, &Character::trivial(p)).unwrap();
        assert_eq!(d.n_h, torus_zeros(&h, p));
        let k_max = 5;
        let got = d.m_h.unwrap().series(k_max);
        let mut want = vec![Complex64::zero(); k_max + 1];
        for x in 1..p {
            for y in 1..p {
                let a = h.eval(&BigInt::from(x), &BigInt::from(y));
                // ∫_{Z_p} |a + p z|^s dz = p · ∫_{a + pZ_p} |w|^s dw
                let part = naive_onevar(&a, 1, 1, 1, p, k_max, |_| Complex64::one());
                for (w, c) in want.iter_mut().zip(part) {
                    *w += c * p as f64;
                }
            }
        }
        for k in 0..=k_max {
            let g = common_to_f64(&got[k]);
            assert!((g - want[k].re).abs() < 1e-9 * g.abs().max(1.0), "{h}, p = {p}, t^{k}: {g} vs {}", want[k]);
        }
    }
}

fn common_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

#[test]
fn fit_recovers_the_cusp() {
    let f: Poly = "y^2-x^3".parse().unwrap();
    let table = measure_level_sets(&f, 3, 16, 1, &MeasureOptions::default()).unwrap();
    let series = zeta_series(&table, &Character::trivial(3)).unwrap().rational_coeffs().unwrap();
    match fit_rational(&series, 3, &[(1, 1), (5, 6)], &FitOptions::default()).unwrap() {
        FitOutcome::Consistent { function, .. } => {
            assert_eq!(function.pole_real_parts(), vec![q(-5, 6), q(-1, 1)]);
            assert_eq!(function.series(16), series);
        }
        other => panic!("{other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn onevar_matches_enumeration(
        a in -200i64..200,
        e in 0u32..4,
        n in 1u32..3,
        big_n in 1u32..4,
        p in prop::sample::select(vec![3u64, 5]),
        c in 1u32..=2,
        k in 0u64..20,
    ) {
        let k_max = 5;
        let chi = Character::new(p, c, k).unwrap();
        let a = BigInt::from(a);
        let got = igusa_onevar_integral(&a, e, n, big_n, &chi, k_max).unwrap();
        let want = naive_onevar(&a, e, n, big_n, p, k_max, |u| chi.eval(u).unwrap());
        for deg in 0..=k_max {
            let g = got[deg].to_complex();
            // Enumeration mod p^{K+2} drops x with v(x) > K, which only reaches deg > K.
            prop_assert!((g - want[deg]).norm() < 1e-12, "t^{}: {} vs {}", deg, g, want[deg]);
        }
    }

    #[test]
    fn series_are_bounded_by_level_masses(
        terms in prop::collection::vec((0u32..=4, 0u32..=4, -8i64..=8), 1..=5),
        p in prop::sample::select(vec![3u64, 5]),
        c in 1u32..=2,
    ) {
        let f = Poly::from_terms(terms);
        let table = measure_level_sets(&f, p, 4, c, &MeasureOptions::default()).unwrap();
        let triv = zeta_series(&table, &Character::trivial(p)).unwrap().rational_coeffs().unwrap();
        prop_assert!(triv.iter().all(|a| *a >= Q::zero()));
        prop_assert!(triv.iter().sum::<Q>() <= Q::one());
        for chi in enumerate_characters(p, c).unwrap() {
            let z = zeta_series(&table, &chi).unwrap();
            for (k, a) in z.complex_coeffs().iter().enumerate() {
                prop_assert!(a.norm() <= common_to_f64(&table.level_total(k as u32)) + 1e-12);
            }
        }
    }

    #[test]
    fn ratfun_arithmetic_commutes_with_series(f in arb_ratfun(), g in arb_ratfun(), c in -5i64..5) {
        let k = 12;
        let sum: Vec<Q> = f.series(k).iter().zip(g.series(k)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(f.add(&g).series(k), sum);
        let diff: Vec<Q> = f.series(k).iter().zip(g.series(k)).map(|(x, y)| x - y).collect();
        prop_assert_eq!(f.sub(&g).series(k), diff);
        let scaled: Vec<Q> = f.series(k).iter().map(|x| x * q(c, 1)).collect();
        prop_assert_eq!(f.scale(&q(c, 1)).series(k), scaled);
        prop_assert_eq!(f.cancel_common_factors().series(k), f.series(k));
    }

    #[test]
    fn fit_finds_what_it_was_given(f in arb_ratfun()) {
        // A shorter denominator may also fit the truncated data, so only the
        // reproduction of the data and the degree bound are guaranteed.
        let basis: Vec<(u64, u64)> = f.factors.iter().map(|d| (d.a, d.b)).collect();
        prop_assume!(!basis.is_empty());
        let k = f.denominator_degree() + f.numerator.len() + 6;
        let s = f.series(k);
        match fit_rational(&s, 3, &basis, &FitOptions::default()).unwrap() {
            FitOutcome::Consistent { function, .. } => {
                prop_assert_eq!(function.series(k), s);
                prop_assert!(function.denominator_degree() <= f.denominator_degree());
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
