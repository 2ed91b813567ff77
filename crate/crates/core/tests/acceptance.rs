//! The ten acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line before asserting.

mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{geometric_product, naive_exp_sum, naive_level_sets, naive_onevar, qpow, torus_zeros, val, Q};
use igusa::arith::{analyze_edges, candidate_poles_global};
use igusa::expsum::{decay_report, exp_sum_denef_many, exp_sum_direct, DecayOptions, DEFAULT_POINT_BUDGET};
use igusa::geom::{conical_subdivision, newton_polygon, refine_to_simple};
use igusa::padic::{enumerate_characters, measure_level_sets, Character, MeasureOptions};
use igusa::poly::{Poly, Weight};
use igusa::zeta::{
    example_polynomial, fit_rational, golden_example_forms, igusa_onevar_integral, spf_data, zeta_series, FitOptions,
    FitOutcome, GoldenCase, GoldenParams,
};

fn verdict(n: u32, name: &str, ok: bool, detail: String) {
    println!("{} criterion {n} ({name}): {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} ({name}) failed: {detail}");
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn opts() -> MeasureOptions {
    MeasureOptions::default()
}

/// The trivial-character closed form expanded term by term from geometric series, independently of the
/// library's rational-function code.
fn trivial_form_expansion(qq: u64, n: i64, t: i64, k_max: usize) -> Vec<Q> {
    let u = Q::one() - qpow(qq, -1);
    let u2 = &u * &u;
    let qf = Q::from_integer(qq.into());
    type Term = (Vec<(i64, usize, Q)>, Vec<(u64, u64)>);
    let terms: Vec<Term> = vec![
        (vec![(1, 0, Q::from_integer(2.into()) * &u)], vec![]),
        (vec![(2, 4, u.clone())], vec![(2, 4)]),
        (vec![(7, 16, u2.clone())], vec![(2, 4), (5, 12)]),
        (vec![(8, 18, u2.clone())], vec![(3, 6), (5, 12)]),
        (vec![(3, 6, u.clone())], vec![(3, 6)]),
        (vec![(6, 14, u2.clone())], vec![(1, 2), (5, 12)]),
        (vec![(9, 20, -u2.clone())], vec![(1, 2), (9, 20)]),
        (vec![(6, 12, (&qf - Q::from_integer(2.into())) * &u)], vec![(5, 12)]),
        (vec![(10, 20, u.clone())], vec![(9, 20)]),
        // q^{-9-20s} { q^{-1}(q^{-1-s} − q^{-1}) N + (1 − q^{-1})² (1 − q^{-1-s}) − q^{-2}(1 − q^{-1-s}) T }
        (
            vec![
                (11, 21, Q::from_integer(n.into())),
                (11, 20, -Q::from_integer(n.into())),
                (9, 20, u2.clone()),
                (10, 21, -u2.clone()),
                (11, 20, -Q::from_integer(t.into())),
                (12, 21, Q::from_integer(t.into())),
            ],
            vec![(1, 1), (9, 20)],
        ),
    ];
    let mut total = vec![Q::zero(); k_max + 1];
    for (num, den) in &terms {
        for (k, c) in geometric_product(qq, num, den, k_max).into_iter().enumerate() {
            total[k] += c;
        }
    }
    total
}

#[test]
fn criterion_01_golden_zeta_trivial_character() {
    let p = 5;
    let x2 = Poly::x().pow(2) + Poly::constant(1);
    let n = (p as i64 - 1) * (1..p).filter(|x| (x * x + 1) % p == 0).count() as i64;
    let t = torus_zeros(&"y^2+x^8".parse().unwrap(), p) as i64;
    assert_eq!((n, t), (8, 8));
    assert_eq!(torus_zeros(&x2, p), 8);

    let k_max = 8;
    let closed = trivial_form_expansion(p, n, t, k_max);
    let params = GoldenParams { n: Q::from_integer(n.into()), t: Q::from_integer(t.into()), s: Q::one() };
    let transcribed = golden_example_forms(p, GoldenCase::Triv, &params).series(k_max);
    assert_eq!(transcribed, closed, "stored closed form disagrees with its term-by-term expansion");

    let table = measure_level_sets(&example_polynomial(), p, k_max as u32, 1, &opts()).unwrap();
    let oracle = zeta_series(&table, &Character::trivial(p)).unwrap().rational_coeffs().unwrap();
    let mismatch = (0..=k_max).find(|&k| oracle[k] != closed[k]);
    let detail = match mismatch {
        None => format!("A_0..A_{k_max} equal the closed form exactly"),
        Some(k) => format!("A_{k}: oracle {} vs closed form {}", oracle[k], closed[k]),
    };
    verdict(1, "golden zeta, trivial character", mismatch.is_none(), detail);
}

#[test]
fn criterion_02_character_vanishing() {
    let p = 5;
    let table = measure_level_sets(&example_polynomial(), p, 5, 2, &opts()).unwrap();
    let wild: Vec<Character> = enumerate_characters(p, 2).unwrap().into_iter().filter(|c| c.conductor == 2).collect();
    assert_eq!(wild.len(), 16);
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for chi in &wild {
        let z = zeta_series(&table, chi).unwrap();
        exact &= z.all_zero();
        worst = z.complex_coeffs().iter().map(|c| c.norm()).fold(worst, f64::max);
    }
    verdict(
        2,
        "character vanishing",
        exact && worst < 1e-9,
        format!("{} characters, exact zeros: {exact}, max |A_k| = {worst:e}", wild.len()),
    );
}

#[test]
fn criterion_03_fan_reproduction() {
    let poly = newton_polygon(&example_polynomial()).unwrap();
    let cones = refine_to_simple(&conical_subdivision(&poly));
    let mut got: Vec<Vec<(u64, u64)>> = cones.iter().map(|c| c.generators.clone()).collect();
    let mut table1 = vec![
        vec![(0, 1)],
        vec![(0, 1), (1, 1)],
        vec![(1, 1)],
        vec![(1, 1), (3, 2)],
        vec![(3, 2)],
        vec![(3, 2), (2, 1)],
        vec![(2, 1)],
        vec![(2, 1), (1, 0)],
        vec![(1, 0)],
    ];
    for v in got.iter_mut().chain(table1.iter_mut()) {
        v.sort();
    }
    got.sort();
    table1.sort();
    verdict(3, "fan reproduction", got == table1, format!("{} cones", got.len()));
}

#[test]
fn criterion_04_arithmetic_polygon_data() {
    let f = example_polynomial();
    let edges = analyze_edges(&f, 5).unwrap();
    let ea = edges.iter().find(|e| e.weight == Weight(3, 2)).expect("edge with weight (3,2)");
    let mut ok = !ea.polygons.is_empty();
    let mut detail = String::new();
    for polygon in &ea.polygons {
        let segs = &polygon.segments;
        ok &= segs.len() == 2
            && segs[0].big_d == 12
            && segs[0].eps == 2
            && segs[1].big_d == 20
            && polygon.taus == vec![q(4, 1)]
            && polygon.boundary_description() == vec!["w=2z on [0,4]".to_string(), "w=8 for z>=4".to_string()];
        detail = polygon.boundary_description().join("; ");
    }
    let cands = candidate_poles_global(&f, 5).unwrap();
    ok &= cands.values == vec![q(-5, 12), q(-9, 20), q(-1, 2), q(-1, 1)];
    ok &= cands.beta == q(-5, 12);
    let values: Vec<String> = cands.values.iter().map(ToString::to_string).collect();
    verdict(
        4,
        "arithmetic polygon data",
        ok,
        format!("{} roots; {detail}; poles {{{}}}; beta {}", ea.polygons.len(), values.join(", "), cands.beta),
    );
}

#[test]
fn criterion_05_rational_fit_soundness() {
    let f: Poly = "y^2-x^3".parse().unwrap();
    let table = measure_level_sets(&f, 3, 16, 1, &opts()).unwrap();
    let series = zeta_series(&table, &Character::trivial(3)).unwrap().rational_coeffs().unwrap();
    assert_eq!(series.len(), 17);
    let full = fit_rational(&series, 3, &[(1, 1), (5, 6)], &FitOptions::default()).unwrap();
    let reproduced = match &full {
        FitOutcome::Consistent { function, .. } => function.series(16) == series,
        FitOutcome::Inconsistent { .. } => false,
    };
    let reduced = fit_rational(&series, 3, &[(1, 1)], &FitOptions::default()).unwrap();
    let violation = match &reduced {
        FitOutcome::Inconsistent { first_violation, .. } => Some(*first_violation),
        FitOutcome::Consistent { .. } => None,
    };
    verdict(
        5,
        "rational fit soundness",
        reproduced && violation.is_some(),
        format!(
            "basis {{(1,1),(5,6)}} reproduces 17 coefficients: {reproduced}; {{(1,1)}} first violation: {violation:?}"
        ),
    );
}

#[test]
fn criterion_06_denef_cross_check() {
    let f = example_polynomial();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for m in 1..=3 {
        let denef = exp_sum_denef_many(&f, 5, m, &[1, 2, 3, 4], &opts()).unwrap();
        for d in denef {
            let direct = exp_sum_direct(&f, 5, m, d.u, DEFAULT_POINT_BUDGET).unwrap().value();
            let naive = naive_exp_sum(&f, 5, m, d.u);
            assert!((direct - naive).norm() < 1e-12);
            let diff = (direct - d.value()).norm();
            ok &= diff <= d.error_bound + 1e-8;
            worst = worst.max(diff);
        }
    }
    verdict(6, "Denef cross-check", ok, format!("12 cases, max |direct - denef| = {worst:e}"));
}

#[test]
fn criterion_07_spf_identity() {
    let k_max = 6usize;
    let mut checked = 0;
    let mut failures = Vec::new();
    for text in ["y^2-x^3", "(y-x)^2+x^3", "x*y+x^3"] {
        let f: Poly = text.parse().unwrap();
        for p in [3u64, 5] {
            let table = measure_level_sets(&f, p, k_max as u32, 1, &opts()).unwrap();
            for chi in enumerate_characters(p, 1).unwrap() {
                let spf = spf_data(&f, &chi, None).unwrap();
                let restricted_opts = MeasureOptions { restrict_to: Some(spf.singular.clone()), ..opts() };
                let restricted = measure_level_sets(&f, p, k_max as u32, 1, &restricted_opts).unwrap();
                let whole = zeta_series(&table, &chi).unwrap().coeffs;
                let sing = zeta_series(&restricted, &chi).unwrap().coeffs;
                for k in 0..k_max {
                    // ν + σ (1 − q⁻¹) t / (1 − q⁻¹ t)
                    let mut rhs = sing[k].clone();
                    if k == 0 {
                        for (idx, c) in spf.nu.coeffs().iter().enumerate() {
                            rhs.add_term(idx as u64, c);
                        }
                    } else {
                        let smooth = &spf.sigma * (Q::one() - qpow(p, -1)) * qpow(p, -(k as i64 - 1));
                        rhs.add_term(0, &smooth);
                    }
                    for (idx, c) in whole[k].coeffs().iter().enumerate() {
                        rhs.add_term(idx as u64, &-c.clone());
                    }
                    if !rhs.is_zero() {
                        failures.push(format!("{text} p={p} {chi} k={k}"));
                    }
                }
                checked += 1;
            }
        }
    }
    verdict(
        7,
        "stationary phase identity",
        failures.is_empty(),
        format!("{checked} (f, p, χ) cases to t^{}; failures: {failures:?}", k_max - 1),
    );
}

#[test]
fn criterion_08_onevar_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let k_max = 4usize;
    let mut branches = [0usize; 3];
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let p = if rng.gen_bool(0.5) { 3u64 } else { 5 };
        let e: u32 = rng.gen_range(0..=3);
        let n: u32 = rng.gen_range(1..=3);
        let big_n: u32 = rng.gen_range(1..=3);
        let a = match rng.gen_range(0..3) {
            0 => BigInt::from(0),
            1 => BigInt::from(p.pow(e) * rng.gen_range(1..6u64)),
            _ => BigInt::from(rng.gen_range(1..200u64)) * if rng.gen_bool(0.3) { -1 } else { 1 },
        };
        let chars = enumerate_characters(p, 2).unwrap();
        let chi = chars[rng.gen_range(0..chars.len())];
        let chi_n = Character::new(p, chi.conductor, chi.k * big_n as u64).unwrap();
        let a_in_ideal = a.is_zero() || val(&a, p) >= e;
        let branch = if a_in_ideal && chi_n.is_trivial() {
            0
        } else if !a_in_ideal && (chi_n.is_trivial() || chi_n.conductor <= e - val(&a, p)) {
            1
        } else {
            2
        };
        branches[branch] += 1;
        let lib = igusa_onevar_integral(&a, e, n, big_n, &chi, k_max).unwrap();
        let naive = naive_onevar(&a, e, n, big_n, p, k_max, |u| chi.eval(u).unwrap());
        for (x, y) in lib.iter().zip(&naive) {
            worst = worst.max((x.to_complex() - y).norm());
        }
    }
    let ok = worst < 1e-12 && branches.iter().all(|&b| b > 0);
    verdict(8, "one-variable integral", ok, format!("50 tuples, branches {branches:?}, max deviation {worst:e}"));
}

#[test]
fn criterion_09_oracle_ground_truth() {
    let (p, k_max, c) = (3u64, 2u32, 2u32);
    let mut bad = Vec::new();
    let corpus = common::corpus();
    for f in &corpus {
        let table = measure_level_sets(f, p, k_max, c, &opts()).unwrap();
        let (mu, tail) = naive_level_sets(f, p, k_max, c);
        if table.mu != mu || table.tail != tail {
            bad.push(f.to_string());
        }
    }
    verdict(9, "oracle ground truth", bad.is_empty(), format!("{} polynomials, mismatches: {bad:?}", corpus.len()));
}

#[test]
fn criterion_10_decay_bound() {
    let f = example_polynomial();
    let rep = decay_report(&f, 5, 5, &DecayOptions { beta: Some(q(-5, 12)), ..Default::default() }).unwrap();
    let ratios: Vec<String> = rep.rows.iter().map(|r| format!("{:.4}", r.ratio)).collect();
    let first = rep.rows[0].ratio;
    let last = rep.rows[4].ratio;
    let rho = last / first;
    assert!((rho - rep.rho).abs() < 1e-12);
    let direct = exp_sum_direct(&f, 5, 2, 1, DEFAULT_POINT_BUDGET).unwrap().value();
    assert!((direct - Complex64::new(0.04, 0.0)).norm() < 1e-12);
    verdict(10, "decay bound", rho <= 2.0, format!("ratios [{}], rho = {rho:.4}", ratios.join(", ")));
}
