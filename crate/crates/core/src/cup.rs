//! Cup-length and category-weight lower bounds by exhaustive search over
//! generator factorizations.
//!
//! A nonzero product of `m` positive-degree classes expands into a nonzero
//! product of at least `m` generators, so maximising `sum e_i` over nonzero
//! monomials `prod x_i^{e_i}` gives the mod-p cup-length. Weighting each
//! generator by a lower bound for its category weight and using
//! superadditivity of weight under products gives a lower bound for the
//! weight of the whole space.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, GenIndex, Monomial, RingPresentation};

pub const DEFAULT_MAX_SEARCH: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CupError {
    #[error("search space has {vectors} exponent vectors, above the cap of {cap}")]
    SearchOverflow { vectors: u128, cap: u64 },
    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),
    #[error("weight assignment has {found} entries, ring has {expected} generators")]
    WeightArity { expected: usize, found: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Per-generator lower bounds for category weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    per_generator: Vec<u32>,
}

impl WeightAssignment {
    /// Every generator weighs 1; the weighted search then reproduces the
    /// plain cup-length.
    pub fn uniform(ring: &RingPresentation) -> Self {
        WeightAssignment {
            per_generator: vec![1; ring.num_generators()],
        }
    }

    /// Weights declared on the presentation itself (default 1).
    pub fn from_ring(ring: &RingPresentation) -> Self {
        WeightAssignment {
            per_generator: (0..ring.num_generators()).map(|i| ring.weight(i)).collect(),
        }
    }

    /// Weights for the cohomology of a space. When the space's loop space has
    /// cohomology concentrated in even degrees (compact Lie groups), every
    /// even-degree class has weight at least 2.
    pub fn for_space(ring: &RingPresentation, loopspace_even: bool) -> Self {
        let mut w = Self::from_ring(ring);
        if loopspace_even {
            for (i, g) in ring.generators().iter().enumerate() {
                if g.degree % 2 == 0 {
                    w.per_generator[i] = w.per_generator[i].max(2);
                }
            }
        }
        w
    }

    /// Explicit weights; zero entries are raised to 1.
    pub fn from_vec(weights: Vec<u32>) -> Self {
        WeightAssignment {
            per_generator: weights.into_iter().map(|w| w.max(1)).collect(),
        }
    }

    pub fn get(&self, g: GenIndex) -> u32 {
        self.per_generator[g]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.per_generator
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupResult {
    pub value: u32,
    /// Exponent vector of a nonzero monomial realising `value`.
    pub witness: Vec<u32>,
    pub weighted: bool,
}

/// Largest `sum e_i` over nonzero monomials.
pub fn cup_length(ring: &RingPresentation, max_search: u64) -> Result<CupResult, CupError> {
    let weights = WeightAssignment::uniform(ring);
    let mut r = search(ring, &weights, max_search)?;
    r.weighted = false;
    Ok(r)
}

/// Largest `sum w_i e_i` over nonzero monomials: a lower bound for the
/// mod-p category weight of the space and hence for its stable category.
pub fn weighted_wgt_lower(
    ring: &RingPresentation,
    weights: &WeightAssignment,
    max_search: u64,
) -> Result<CupResult, CupError> {
    let mut r = search(ring, weights, max_search)?;
    r.weighted = true;
    Ok(r)
}

fn search(
    ring: &RingPresentation,
    weights: &WeightAssignment,
    max_search: u64,
) -> Result<CupResult, CupError> {
    let n = ring.num_generators();
    if weights.as_slice().len() != n {
        return Err(CupError::WeightArity {
            expected: n,
            found: weights.as_slice().len(),
        });
    }
    let mut bounds = Vec::with_capacity(n);
    for g in 0..n {
        bounds.push(ring.nilpotency_order(g)? - 1);
    }
    let vectors: u128 = bounds.iter().map(|&b| u128::from(b) + 1).product();
    if vectors > u128::from(max_search) {
        return Err(CupError::SearchOverflow {
            vectors,
            cap: max_search,
        });
    }
    let degrees: Vec<u32> = ring.generators().iter().map(|g| g.degree).collect();
    let hint = ring.top_degree_hint();

    let mut best: Option<(u32, Vec<u32>)> = None;
    let mut e = vec![0u32; n];
    // Lexicographic enumeration; a strict improvement test keeps the
    // smallest witness among ties.
    loop {
        let degree: u32 = e.iter().zip(&degrees).map(|(a, b)| a * b).sum();
        if hint.map_or(true, |h| degree <= h) {
            let value: u32 = e.iter().zip(weights.as_slice()).map(|(a, w)| a * w).sum();
            if best.as_ref().map_or(true, |(v, _)| value > *v)
                && !ring.normal_form(&Monomial::new(1, e.clone())).is_zero()
            {
                best = Some((value, e.clone()));
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                let (value, witness) = best.unwrap_or((0, vec![0; n]));
                return Ok(CupResult {
                    value,
                    witness,
                    weighted: false,
                });
            }
            i -= 1;
            if e[i] < bounds[i] {
                e[i] += 1;
                for x in &mut e[i + 1..] {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Independent cup-length computation for small rings: the largest `m` with
/// `I^m != 0`, where `I` is the span of all positive-degree monomials and
/// `I^k` is spanned by products of spanning monomials. Used to check
/// [`cup_length`] in tests.
pub fn cup_bruteforce_oracle(ring: &RingPresentation, degree_cap: u32) -> Result<u32, CupError> {
    let n = ring.num_generators();
    if n > 3 {
        return Err(CupError::TooLarge(format!("{n} generators (max 3)")));
    }
    let normalise = |m: Monomial| -> Option<Vec<u32>> {
        if m.is_zero() {
            None
        } else {
            Some(m.exponents().to_vec())
        }
    };

    // Spanning set of the whole algebra by closing {1} under generators.
    let mut basis: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier = vec![ring.one()];
    while let Some(m) = frontier.pop() {
        for g in 0..n {
            let prod = ring.multiply_monomials(&m, &ring.generator_monomial(g));
            if let Some(e) = normalise(prod) {
                let top = ring.degree(&Monomial::new(1, e.clone()));
                if top > degree_cap {
                    return Err(CupError::TooLarge(format!(
                        "degree {top} exceeds cap {degree_cap}"
                    )));
                }
                if basis.insert(e.clone()) {
                    frontier.push(Monomial::new(1, e));
                }
            }
        }
    }
    let ideal: Vec<Monomial> = basis.into_iter().map(|e| Monomial::new(1, e)).collect();

    let mut power: BTreeSet<Vec<u32>> = ideal.iter().map(|m| m.exponents().to_vec()).collect();
    let mut m = 0;
    while !power.is_empty() {
        m += 1;
        let mut next = BTreeSet::new();
        for a in &power {
            let a = Monomial::new(1, a.clone());
            for b in &ideal {
                if let Some(e) = normalise(ring.multiply_monomials(&a, b)) {
                    next.insert(e);
                }
            }
        }
        power = next;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn so5() -> RingPresentation {
        RingPresentation::builder(2)
            .generator("x1", 1, Some(8))
            .exterior("x3", 3)
            .build()
            .unwrap()
    }

    fn pu3() -> RingPresentation {
        RingPresentation::builder(3)
            .exterior("x1", 1)
            .generator("x2", 2, Some(3))
            .exterior("x3", 3)
            .build()
            .unwrap()
    }

    fn pu2() -> RingPresentation {
        RingPresentation::builder(2)
            .generator("x1", 1, None)
            .substitution("x1", 2, 1, &[("x2", 1)])
            .generator("x2", 2, Some(2))
            .build()
            .unwrap()
    }

    #[test]
    fn so5_cup_and_witness() {
        let r = cup_length(&so5(), DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(r.value, 8);
        assert_eq!(r.witness, vec![7, 1]);
        assert!(!r.weighted);
    }

    #[test]
    fn su4_exterior() {
        let r = RingPresentation::builder(2)
            .exterior("x3", 3)
            .exterior("x5", 5)
            .exterior("x7", 7)
            .build()
            .unwrap();
        assert_eq!(cup_length(&r, DEFAULT_MAX_SEARCH).unwrap().value, 3);
    }

    #[test]
    fn point_has_cup_zero() {
        let r = RingPresentation::builder(5).build().unwrap();
        let c = cup_length(&r, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!(c.value, 0);
        assert!(c.witness.is_empty());
        assert_eq!(cup_bruteforce_oracle(&r, 12).unwrap(), 0);
    }

    #[test]
    fn pu2_substitution_chain() {
        let r = pu2();
        let c = cup_length(&r, DEFAULT_MAX_SEARCH).unwrap();
        assert_eq!((c.value, c.witness), (3, vec![3, 0]));
        let w = weighted_wgt_lower(&r, &WeightAssignment::for_space(&r, true), DEFAULT_MAX_SEARCH)
            .unwrap();
        assert_eq!(w.value, 3);
        // Ties go to the lexicographically smallest vector.
        assert_eq!(w.witness, vec![1, 1]);
    }

    #[test]
    fn pu3_weight_and_cup() {
        let r = pu3();
        let even = WeightAssignment::for_space(&r, true);
        assert_eq!(even.as_slice(), &[1, 2, 1]);
        assert_eq!(weighted_wgt_lower(&r, &even, DEFAULT_MAX_SEARCH).unwrap().value, 6);
        let flat = WeightAssignment::uniform(&r);
        assert_eq!(weighted_wgt_lower(&r, &flat, DEFAULT_MAX_SEARCH).unwrap().value, 4);
        assert_eq!(cup_length(&r, DEFAULT_MAX_SEARCH).unwrap().value, 4);
    }

    #[test]
    fn oracle_small_cases() {
        let ext = RingPresentation::builder(2).exterior("x1", 1).build().unwrap();
        assert_eq!(cup_bruteforce_oracle(&ext, 12).unwrap(), 1);
        let t4 = RingPresentation::builder(2)
            .generator("x1", 1, Some(4))
            .build()
            .unwrap();
        assert_eq!(cup_bruteforce_oracle(&t4, 12).unwrap(), 3);
        let z3 = RingPresentation::builder(3)
            .generator("x2", 2, Some(3))
            .build()
            .unwrap();
        assert_eq!(cup_bruteforce_oracle(&z3, 12).unwrap(), 2);
        assert_eq!(cup_bruteforce_oracle(&pu3(), 12).unwrap(), 4);
    }

    #[test]
    fn oracle_refuses_large_instances() {
        assert!(matches!(
            cup_bruteforce_oracle(&so5(), 6),
            Err(CupError::TooLarge(_))
        ));
        let four = RingPresentation::builder(2)
            .exterior("a", 1)
            .exterior("b", 1)
            .exterior("c", 1)
            .exterior("d", 1)
            .build()
            .unwrap();
        assert!(matches!(
            cup_bruteforce_oracle(&four, 12),
            Err(CupError::TooLarge(_))
        ));
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(
            cup_length(&so5(), 10),
            Err(CupError::SearchOverflow { vectors: 16, cap: 10 })
        ));
    }

    #[test]
    fn weight_arity_checked() {
        let w = WeightAssignment::from_vec(vec![1]);
        assert!(matches!(
            weighted_wgt_lower(&so5(), &w, DEFAULT_MAX_SEARCH),
            Err(CupError::WeightArity { .. })
        ));
    }
}
