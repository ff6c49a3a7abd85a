mod common;

use catbound_core::algebra::{Monomial, RingPresentation};
use catbound_core::cup::{
    cup_bruteforce_oracle, cup_length, weighted_wgt_lower, WeightAssignment, DEFAULT_MAX_SEARCH,
};
use common::{build_ring, effective_trunc, fit_top_degree, gen_spec, prime, small_ring, GenSpec, TOP};
use proptest::prelude::*;

/// A tensor product of truncated polynomial and exterior algebras has
/// cup-length `sum (t_i - 1)`.
fn closed_form(p: u32, specs: &[GenSpec]) -> u32 {
    specs.iter().map(|s| effective_trunc(p, s) - 1).sum()
}

/// Largest `m` such that some product of `m` generators is nonzero, found by
/// breadth-first multiplication rather than by exponent enumeration.
fn product_depth(ring: &RingPresentation) -> u32 {
    let n = ring.num_generators();
    let mut layer = vec![ring.one()];
    let mut depth = 0;
    loop {
        let mut next: Vec<Monomial> = Vec::new();
        for m in &layer {
            for g in 0..n {
                let prod = ring.multiply_monomials(m, &ring.generator_monomial(g));
                if !prod.is_zero() {
                    let unit = Monomial::new(1, prod.exponents().to_vec());
                    if !next.contains(&unit) {
                        next.push(unit);
                    }
                }
            }
        }
        if next.is_empty() {
            return depth;
        }
        depth += 1;
        layer = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn engine_matches_oracles((p, specs) in small_ring()) {
        let ring = build_ring(p, &specs, false);
        let engine = cup_length(&ring, DEFAULT_MAX_SEARCH).unwrap();
        let oracle = cup_bruteforce_oracle(&ring, TOP).unwrap();
        prop_assert_eq!(engine.value, oracle, "ring {}", ring);
        prop_assert_eq!(engine.value, closed_form(p, &specs));
        prop_assert_eq!(engine.value, product_depth(&ring));
    }

    #[test]
    fn witness_is_nonzero_and_realises_value((p, specs) in small_ring()) {
        let ring = build_ring(p, &specs, false);
        let r = cup_length(&ring, DEFAULT_MAX_SEARCH).unwrap();
        let w = Monomial::new(1, r.witness.clone());
        prop_assert!(!ring.normal_form(&w).is_zero());
        prop_assert_eq!(w.length(), r.value);
    }

    #[test]
    fn cup_length_is_additive_under_tensor(
        (p, a) in small_ring(),
        b in prop::collection::vec(gen_spec(6, 6), 1..=3),
    ) {
        let b = fit_top_degree(p, b, TOP);
        prop_assume!(!b.is_empty());
        let ra = build_ring(p, &a, false);
        let rb = build_ring(p, &b, false);
        let rab = ra.tensor(&rb).unwrap();
        let ca = cup_length(&ra, DEFAULT_MAX_SEARCH).unwrap().value;
        let cb = cup_length(&rb, DEFAULT_MAX_SEARCH).unwrap().value;
        prop_assert_eq!(cup_length(&rab, DEFAULT_MAX_SEARCH).unwrap().value, ca + cb);
    }

    #[test]
    fn weighted_dominates_plain(
        (p, specs) in small_ring(),
        raw in prop::collection::vec(1u32..4, 3),
    ) {
        let ring = build_ring(p, &specs, false);
        let weights = WeightAssignment::from_vec(raw[..ring.num_generators()].to_vec());
        let plain = cup_length(&ring, DEFAULT_MAX_SEARCH).unwrap();
        let weighted = weighted_wgt_lower(&ring, &weights, DEFAULT_MAX_SEARCH).unwrap();
        prop_assert!(weighted.value >= plain.value);
        let w = Monomial::new(1, weighted.witness.clone());
        prop_assert!(!ring.normal_form(&w).is_zero());
        let value: u32 = weighted
            .witness
            .iter()
            .zip(weights.as_slice())
            .map(|(e, w)| e * w)
            .sum();
        prop_assert_eq!(value, weighted.value);
    }

    #[test]
    fn substitution_rings_stay_searchable(
        p in prime(),
        specs in prop::collection::vec(gen_spec(4, 4), 1..=3),
    ) {
        let ring = build_ring(p, &specs, true);
        let r = cup_length(&ring, DEFAULT_MAX_SEARCH).unwrap();
        prop_assert!(!ring.normal_form(&Monomial::new(1, r.witness.clone())).is_zero());
        prop_assert_eq!(r.value, product_depth(&ring));
    }
}

fn exterior(n: u32) -> RingPresentation {
    let mut b = RingPresentation::builder(2);
    for k in 2..=n {
        b = b.exterior(&format!("x{}", 2 * k - 1), 2 * k - 1);
    }
    b.build().unwrap()
}

#[test]
fn exterior_on_odd_classes() {
    for n in 2..=8 {
        assert_eq!(cup_length(&exterior(n), DEFAULT_MAX_SEARCH).unwrap().value, n - 1);
    }
}
