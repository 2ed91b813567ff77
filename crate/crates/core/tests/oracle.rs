mod common;

use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use common::{corpus, naive_level_sets, qpow, Q};
use igusa::padic::{enumerate_characters, measure_level_sets, Character, MeasureOptions, Resolution};
use igusa::poly::Poly;

fn taylor() -> MeasureOptions {
    MeasureOptions::default()
}

fn basic() -> MeasureOptions {
    MeasureOptions { resolution: Resolution::Basic, ..Default::default() }
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..=4, 0u32..=4, -8i64..=8), 1..=5).prop_map(Poly::from_terms)
}

#[test]
fn corpus_matches_enumeration() {
    for (p, k, c) in [(2u64, 3u32, 2u32), (5, 2, 1), (3, 2, 2)] {
        for f in corpus() {
            let table = measure_level_sets(&f, p, k, c, &taylor()).unwrap();
            let (mu, tail) = naive_level_sets(&f, p, k, c);
            assert_eq!(table.mu, mu, "f = {f}, p = {p}, K = {k}, c = {c}");
            assert_eq!(table.tail, tail, "f = {f}, p = {p}");
            assert_eq!(table.total(), Q::one());
            assert_eq!(table.tail_unresolved, Q::zero());
        }
    }
}

#[test]
fn deep_levels_of_a_smooth_curve() {
    // f = x: v(x) = k with ac(x) = u has measure p^{-k-1}.
    let f: Poly = "x".parse().unwrap();
    let table = measure_level_sets(&f, 7, 30, 1, &taylor()).unwrap();
    for k in 0..=30u32 {
        for u in 1..7 {
            assert_eq!(table.mu_at(k, u), qpow(7, -(k as i64) - 1));
        }
    }
    assert_eq!(table.tail, qpow(7, -31));
    assert!(table.stats.visited < 1000, "{:?}", table.stats);
}

#[test]
fn threads_do_not_change_the_table() {
    let f: Poly = "(y^3-x^2)^2+x^4*y^4".parse().unwrap();
    let one = measure_level_sets(&f, 5, 8, 2, &MeasureOptions { threads: Some(1), ..Default::default() }).unwrap();
    let four = measure_level_sets(&f, 5, 8, 2, &MeasureOptions { threads: Some(4), ..Default::default() }).unwrap();
    assert_eq!(one.mu, four.mu);
    assert_eq!(one.tail, four.tail);
    assert_eq!(
        serde_json::to_string(&one.mu.iter().flatten().map(|q| q.to_string()).collect::<Vec<_>>()).unwrap(),
        serde_json::to_string(&four.mu.iter().flatten().map(|q| q.to_string()).collect::<Vec<_>>()).unwrap()
    );
}

#[test]
fn restricted_runs_add_up() {
    let f: Poly = "y^2-x^3".parse().unwrap();
    let p = 3;
    let full = measure_level_sets(&f, p, 6, 1, &taylor()).unwrap();
    let mut mu = vec![vec![Q::zero(); full.units.len()]; 7];
    let mut tail = Q::zero();
    for x in 0..p {
        for y in 0..p {
            let opts = MeasureOptions { restrict_to: Some(vec![(x, y)]), ..Default::default() };
            let part = measure_level_sets(&f, p, 6, 1, &opts).unwrap();
            assert_eq!(part.region, qpow(p, -2));
            assert_eq!(part.total(), part.region);
            for (row, prow) in mu.iter_mut().zip(&part.mu) {
                for (a, b) in row.iter_mut().zip(prow) {
                    *a += b;
                }
            }
            tail += &part.tail;
        }
    }
    assert_eq!(mu, full.mu);
    assert_eq!(tail, full.tail);
}

#[test]
fn budget_is_enforced() {
    let f: Poly = "(y^3-x^2)^2+x^4*y^4".parse().unwrap();
    let opts = MeasureOptions { cell_budget: 10, ..Default::default() };
    assert!(measure_level_sets(&f, 5, 8, 1, &opts).is_err());
}

#[test]
fn character_group_sizes() {
    assert_eq!(enumerate_characters(5, 1).unwrap().len(), 4);
    assert_eq!(enumerate_characters(5, 2).unwrap().len(), 20);
    assert_eq!(enumerate_characters(3, 3).unwrap().len(), 18);
    assert_eq!(enumerate_characters(2, 2).unwrap().len(), 2);
    assert!(enumerate_characters(2, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_polys_match_enumeration(f in arb_poly(), p in prop::sample::select(vec![2u64, 3]), c in 1u32..=2) {
        let k = 2;
        let table = measure_level_sets(&f, p, k, c, &taylor()).unwrap();
        let (mu, tail) = naive_level_sets(&f, p, k, c);
        prop_assert_eq!(&table.mu, &mu);
        prop_assert_eq!(&table.tail, &tail);
        let b = measure_level_sets(&f, p, k, c, &basic()).unwrap();
        prop_assert_eq!(b.mu, mu);
        prop_assert_eq!(b.tail, tail);
    }

    #[test]
    fn mass_is_conserved(f in arb_poly(), p in prop::sample::select(vec![2u64, 3, 5, 7]), k in 0u32..6) {
        let table = measure_level_sets(&f, p, k, 1, &taylor()).unwrap();
        prop_assert_eq!(table.total(), table.region.clone());
        prop_assert_eq!(table.region, Q::one());
        prop_assert!(table.tail_unresolved <= table.tail);
    }

    #[test]
    fn characters_are_homomorphisms(
        p in prop::sample::select(vec![3u64, 5, 7]),
        c in 1u32..=3,
        k in 0u64..400,
        u in 1u64..1000,
        v in 1u64..1000,
    ) {
        prop_assume!(u % p != 0 && v % p != 0);
        let chi = Character::new(p, c, k).unwrap();
        let prod = chi.eval(u).unwrap() * chi.eval(v).unwrap();
        prop_assert!((chi.eval(u * v).unwrap() - prod).norm() < 1e-9);
        prop_assert!((chi.eval(u).unwrap() * chi.inverse().eval(u).unwrap() - Complex64::one()).norm() < 1e-9);
        // Trivial on 1 + p^conductor, and the conductor is minimal.
        let m = chi.modulus();
        prop_assert!((chi.eval(u + m * v).unwrap() - chi.eval(u).unwrap()).norm() < 1e-9);
        if !chi.is_trivial() {
            let coarse = m / p;
            let moves = (0..p).any(|t| (chi.eval(1 + coarse * t).unwrap() - Complex64::one()).norm() > 1e-9);
            let on_units = (1..p).any(|t| (chi.eval(t).unwrap() - Complex64::one()).norm() > 1e-9);
            let nontrivial_at_conductor = if chi.conductor >= 2 { moves } else { on_units };
            prop_assert!(nontrivial_at_conductor);
        }
    }
}
