#![allow(dead_code)]

use catbound_core::algebra::{Monomial, RingPresentation};
use proptest::prelude::*;

/// Raw choices for one generator; turned into a valid presentation by
/// [`build_ring`].
#[derive(Debug, Clone)]
pub struct GenSpec {
    pub degree: u32,
    pub truncation: u32,
    pub substitute: bool,
    pub coeff: u32,
}

pub fn gen_spec(max_degree: u32, max_trunc: u32) -> impl Strategy<Value = GenSpec> {
    (1..=max_degree, 2..=max_trunc, any::<bool>(), 1u32..5).prop_map(
        |(degree, truncation, substitute, coeff)| GenSpec {
            degree,
            truncation,
            substitute,
            coeff,
        },
    )
}

/// Generators in order; a generator flagged `substitute` gets `x_i^a = c x_j`
/// for the first later `x_j` whose degree is a multiple `a >= 2` of its own,
/// provided the sign rules allow it. Everything else is truncated.
pub fn build_ring(p: u32, specs: &[GenSpec], with_subs: bool) -> RingPresentation {
    let names: Vec<String> = (0..specs.len()).map(|i| format!("g{i}")).collect();
    let mut b = RingPresentation::builder(p);
    let mut subs = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let target = specs[i + 1..]
            .iter()
            .position(|t| t.degree % s.degree == 0 && t.degree / s.degree >= 2)
            .map(|k| (i + 1 + k, specs[i + 1 + k].degree / s.degree));
        let allowed = p == 2 || s.degree % 2 == 0;
        match target {
            Some((j, a)) if with_subs && s.substitute && allowed => {
                b = b.generator(&names[i], s.degree, None);
                let c = 1 + (s.coeff - 1) % (p - 1).max(1);
                subs.push((names[i].clone(), a, c, names[j].clone()));
            }
            _ => b = b.generator(&names[i], s.degree, Some(s.truncation)),
        }
    }
    for (g, a, c, t) in &subs {
        b = b.substitution(g, *a, *c, &[(t.as_str(), 1)]);
    }
    b.build().expect("generated presentation is valid")
}

/// Effective truncation over Z/p: odd classes square to zero when p is odd.
pub fn effective_trunc(p: u32, s: &GenSpec) -> u32 {
    if p != 2 && s.degree % 2 == 1 {
        2
    } else {
        s.truncation
    }
}

/// Clamps truncations so that the top degree stays within `top`, dropping
/// generators that no longer fit.
pub fn fit_top_degree(p: u32, specs: Vec<GenSpec>, top: u32) -> Vec<GenSpec> {
    let mut left = top;
    let mut out = Vec::new();
    for mut s in specs {
        let max_t = left / s.degree + 1;
        if max_t < 2 {
            continue;
        }
        s.truncation = s.truncation.min(max_t);
        left -= s.degree * (effective_trunc(p, &s) - 1);
        out.push(s);
    }
    out
}

pub fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3u32), Just(5u32)]
}

/// A ring with up to four generators, substitutions included, and `arity`
/// random monomials in it.
pub fn ring_and_monomials(
    p: u32,
    arity: usize,
) -> impl Strategy<Value = (RingPresentation, Vec<Monomial>)> {
    prop::collection::vec(gen_spec(4, 5), 1..=4).prop_flat_map(move |specs: Vec<GenSpec>| {
        let ring = build_ring(p, &specs, true);
        let n = ring.num_generators();
        let mono = (1u32..p.max(2), prop::collection::vec(0u32..4, n))
            .prop_map(|(c, e)| Monomial::new(c, e));
        (Just(ring), prop::collection::vec(mono, arity))
    })
}

/// `-m` over Z/p.
pub fn negate(p: u32, m: &Monomial) -> Monomial {
    if m.is_zero() {
        m.clone()
    } else {
        Monomial::new((p - m.coeff()) % p, m.exponents().to_vec())
    }
}

pub const TOP: u32 = 12;

/// Substitution-free rings with at most three generators and top degree at
/// most 12.
pub fn small_ring() -> impl Strategy<Value = (u32, Vec<GenSpec>)> {
    (prime(), prop::collection::vec(gen_spec(6, 6), 1..=3))
        .prop_map(|(p, specs)| {
            let specs = fit_top_degree(p, specs, TOP);
            (p, specs)
        })
        .prop_filter("at least one generator", |(_, s)| !s.is_empty())
}
