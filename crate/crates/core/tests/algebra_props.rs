mod common;

use catbound_core::algebra::{Monomial, RingPresentation};
use common::{build_ring, negate, ring_and_monomials, GenSpec};
use proptest::prelude::*;

const CASES: u32 = 1000;

fn check_commutativity(p: u32, ring: &RingPresentation, a: &Monomial, b: &Monomial) {
    let ab = ring.multiply_monomials(a, b);
    let ba = ring.multiply_monomials(b, a);
    let both_odd = ring.degree(a) % 2 == 1 && ring.degree(b) % 2 == 1;
    let expected = if both_odd { negate(p, &ba) } else { ba };
    assert_eq!(ab, expected, "ring {ring}, a = {a:?}, b = {b:?}");
}

fn check_associativity(ring: &RingPresentation, a: &Monomial, b: &Monomial, c: &Monomial) {
    let left = ring.multiply_monomials(&ring.multiply_monomials(a, b), c);
    let right = ring.multiply_monomials(a, &ring.multiply_monomials(b, c));
    assert_eq!(left, right, "ring {ring}, {a:?} {b:?} {c:?}");
}

fn check_idempotence(ring: &RingPresentation, a: &Monomial, b: &Monomial) {
    for m in [a.clone(), ring.multiply_monomials(a, b)] {
        let once = ring.normal_form(&m);
        assert_eq!(ring.normal_form(&once), once, "ring {ring}, {m:?}");
        if !once.is_zero() {
            assert_eq!(ring.degree(&once), ring.degree(&m), "normal form keeps degree");
        }
    }
}

macro_rules! per_prime {
    ($modname:ident, $p:expr) => {
        mod $modname {
            use super::*;

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(CASES))]

                #[test]
                fn graded_commutativity((ring, ms) in ring_and_monomials($p, 2)) {
                    check_commutativity($p, &ring, &ms[0], &ms[1]);
                }

                #[test]
                fn associativity((ring, ms) in ring_and_monomials($p, 3)) {
                    check_associativity(&ring, &ms[0], &ms[1], &ms[2]);
                }

                #[test]
                fn normal_form_idempotent((ring, ms) in ring_and_monomials($p, 2)) {
                    check_idempotence(&ring, &ms[0], &ms[1]);
                }

                #[test]
                fn elements_distribute((ring, ms) in ring_and_monomials($p, 3)) {
                    let a = ring.element(&ms[0]);
                    let b = ring.element(&ms[1]);
                    let c = ring.element(&ms[2]);
                    let left = ring.multiply(&a, &ring.add(&b, &c));
                    let right = ring.add(&ring.multiply(&a, &b), &ring.multiply(&a, &c));
                    prop_assert_eq!(left, right);
                }
            }
        }
    };
}

per_prime!(mod2, 2);
per_prime!(mod3, 3);
per_prime!(mod5, 5);

#[test]
fn substitution_rings_are_generated() {
    // The generator above must actually produce substitution relations.
    let specs = vec![
        GenSpec { degree: 2, truncation: 3, substitute: true, coeff: 2 },
        GenSpec { degree: 4, truncation: 3, substitute: false, coeff: 1 },
    ];
    for p in [2, 3, 5] {
        let ring = build_ring(p, &specs, true);
        assert_eq!(ring.substitutions().len(), 1, "p = {p}");
    }
}
