//! Normal-form arithmetic in finitely presented graded-commutative algebras
//! over `Z/p`.
//!
//! A presentation is a list of positive-degree generators, each carrying at
//! most one reduction rule: a truncation `x^t = 0` or a substitution
//! `x^t = m` where `m` only mentions generators of strictly larger index.
//! Because every rule's left-hand side is a pure power of a distinct
//! generator and substitutions point "forward", rewriting terminates and the
//! reduced monomials form a basis.
//!
//! Monomials are stored as dense exponent vectors indexed by generator
//! position; the implied product order is generator-index order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Position of a generator inside its presentation.
pub type GenIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Declared truncation `x^t = 0`, if any.
    pub truncation: Option<u32>,
}

/// `x^exponent = target`; a `None` target means zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub exponent: u32,
    pub target: Option<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Reduction {
    Truncate(u32),
    Substitute { exponent: u32, target: Monomial },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Error)]
pub enum PresentationError {
    #[error("modulus {0} is not a prime (p must be a prime >= 2)")]
    NotPrime(u32),
    #[error("generator `{0}` is declared twice")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generator `{0}` has degree 0; only positive degrees are allowed")]
    DegreeZero(String),
    #[error("generator `{gen}` has truncation {truncation}; truncations must be >= 2")]
    TruncationTooSmall { gen: String, truncation: u32 },
    #[error("substitution on `{gen}` has exponent {exponent}; exponents must be >= 2")]
    SubstitutionExponent { gen: String, exponent: u32 },
    #[error("generator `{0}` carries more than one relation")]
    ConflictingRelations(String),
    #[error("substitution on `{gen}` mentions `{target}`, which does not come later in the generator list")]
    SubstitutionOrder { gen: String, target: String },
    #[error("substitution on `{gen}` is not homogeneous: lhs degree {lhs}, rhs degree {rhs}")]
    DegreeMismatch { gen: String, lhs: u32, rhs: u32 },
    #[error("odd-degree generator `{0}` must square to zero over an odd prime")]
    OddSquareNonzero(String),
    #[error("generator `{0}` has neither a truncation nor a substitution, so it is not nilpotent")]
    Unbounded(String),
    #[error("weight of `{0}` must be >= 1")]
    ZeroWeight(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator `{gen}` is still nonzero at power {cap}; the presentation (or its top-degree hint) is invalid")]
    NonNilpotent { gen: String, cap: u32 },
    #[error("generator index {0} out of range")]
    BadIndex(GenIndex),
}

/// A single term `coeff * x_1^{e_1} ... x_n^{e_n}`.
///
/// The zero monomial is canonical: coefficient 0 and an empty exponent
/// vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    coeff: u32,
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn zero() -> Self {
        Monomial {
            coeff: 0,
            exponents: Vec::new(),
        }
    }

    /// Build a monomial from a coefficient and a dense exponent vector.
    /// A zero coefficient collapses to the canonical zero.
    pub fn new(coeff: u32, exponents: Vec<u32>) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            Monomial { coeff, exponents }
        }
    }

    pub fn coeff(&self) -> u32 {
        self.coeff
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.coeff == 0
    }

    /// Number of generator factors, `sum e_i`.
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// A `Z/p`-linear combination of normal-form monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    terms: BTreeMap<Vec<u32>, u32>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in generator-index lexicographic order of their exponents.
    pub fn terms(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms
            .iter()
            .map(|(e, &c)| Monomial::new(c, e.clone()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn accumulate(&mut self, m: Monomial, p: u32) {
        if m.is_zero() {
            return;
        }
        let Monomial { coeff, exponents } = m;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let c = (*o.get() + coeff) % p;
                if c == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = c;
                }
            }
        }
    }
}

/// A finitely presented graded-commutative algebra over `Z/p`.
///
/// Immutable after construction; use [`RingBuilder`] to create one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    prime: u32,
    generators: Vec<Generator>,
    substitutions: BTreeMap<GenIndex, Substitution>,
    weights: BTreeMap<GenIndex, u32>,
    top_degree_hint: Option<u32>,
    reductions: Vec<Reduction>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Incremental, name-based construction of a [`RingPresentation`].
#[derive(Debug, Clone)]
pub struct RingBuilder {
    prime: u32,
    generators: Vec<Generator>,
    substitutions: Vec<(String, u32, Option<(u32, Vec<(String, u32)>)>)>,
    weights: Vec<(String, u32)>,
    top_degree_hint: Option<u32>,
}

impl RingBuilder {
    pub fn new(prime: u32) -> Self {
        RingBuilder {
            prime,
            generators: Vec::new(),
            substitutions: Vec::new(),
            weights: Vec::new(),
            top_degree_hint: None,
        }
    }

    pub fn generator(mut self, name: &str, degree: u32, truncation: Option<u32>) -> Self {
        self.generators.push(Generator {
            name: name.to_string(),
            degree,
            truncation,
        });
        self
    }

    /// `x^2 = 0`.
    pub fn exterior(self, name: &str, degree: u32) -> Self {
        self.generator(name, degree, Some(2))
    }

    /// `gen^exponent = coeff * prod(factors)`.
    pub fn substitution(
        mut self,
        gen: &str,
        exponent: u32,
        coeff: u32,
        factors: &[(&str, u32)],
    ) -> Self {
        let factors = factors.iter().map(|(n, e)| (n.to_string(), *e)).collect();
        self.substitutions
            .push((gen.to_string(), exponent, Some((coeff, factors))));
        self
    }

    /// `gen^exponent = 0`, stated as a relation rather than a truncation.
    pub fn zero_relation(mut self, gen: &str, exponent: u32) -> Self {
        self.substitutions.push((gen.to_string(), exponent, None));
        self
    }

    pub fn weight(mut self, gen: &str, weight: u32) -> Self {
        self.weights.push((gen.to_string(), weight));
        self
    }

    pub fn top_degree(mut self, top: u32) -> Self {
        self.top_degree_hint = Some(top);
        self
    }

    pub fn build(self) -> Result<RingPresentation, PresentationError> {
        let p = self.prime;
        if !is_prime(p) {
            return Err(PresentationError::NotPrime(p));
        }
        let mut index = BTreeMap::new();
        for (i, g) in self.generators.iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateGenerator(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(PresentationError::DegreeZero(g.name.clone()));
            }
            if let Some(t) = g.truncation {
                if t < 2 {
                    return Err(PresentationError::TruncationTooSmall {
                        gen: g.name.clone(),
                        truncation: t,
                    });
                }
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))
        };

        let n = self.generators.len();
        let mut substitutions = BTreeMap::new();
        for (gen, exponent, target) in &self.substitutions {
            let gi = lookup(gen)?;
            let g = &self.generators[gi];
            if *exponent < 2 {
                return Err(PresentationError::SubstitutionExponent {
                    gen: gen.clone(),
                    exponent: *exponent,
                });
            }
            if g.truncation.is_some() || substitutions.contains_key(&gi) {
                return Err(PresentationError::ConflictingRelations(gen.clone()));
            }
            let target = match target {
                None => None,
                Some((coeff, factors)) => {
                    let mut exps = vec![0u32; n];
                    let mut deg = 0u32;
                    for (name, e) in factors {
                        let ti = lookup(name)?;
                        if ti <= gi {
                            return Err(PresentationError::SubstitutionOrder {
                                gen: gen.clone(),
                                target: name.clone(),
                            });
                        }
                        exps[ti] += e;
                        deg += e * self.generators[ti].degree;
                    }
                    let lhs = exponent * g.degree;
                    let coeff = coeff % p;
                    if coeff != 0 && deg != lhs {
                        return Err(PresentationError::DegreeMismatch {
                            gen: gen.clone(),
                            lhs,
                            rhs: deg,
                        });
                    }
                    if coeff == 0 {
                        None
                    } else {
                        Some(Monomial::new(coeff, exps))
                    }
                }
            };
            if p != 2 && g.degree % 2 == 1 && (*exponent != 2 || target.is_some()) {
                return Err(PresentationError::OddSquareNonzero(gen.clone()));
            }
            substitutions.insert(
                gi,
                Substitution {
                    exponent: *exponent,
                    target,
                },
            );
        }

        let mut weights = BTreeMap::new();
        for (gen, w) in &self.weights {
            let gi = lookup(gen)?;
            if *w == 0 {
                return Err(PresentationError::ZeroWeight(gen.clone()));
            }
            weights.insert(gi, *w);
        }

        // Targets are stored raw; reduce them once the rule table exists.
        let mut reductions = Vec::with_capacity(n);
        for (i, g) in self.generators.iter().enumerate() {
            let odd_over_odd_prime = p != 2 && g.degree % 2 == 1;
            let r = match (g.truncation, substitutions.get(&i)) {
                (Some(t), _) if odd_over_odd_prime => Reduction::Truncate(t.min(2)),
                (Some(t), _) => Reduction::Truncate(t),
                (None, Some(Substitution { exponent, target: None })) => {
                    Reduction::Truncate(*exponent)
                }
                (None, Some(Substitution {
                    exponent,
                    target: Some(m),
                })) => Reduction::Substitute {
                    exponent: *exponent,
                    target: m.clone(),
                },
                (None, None) if odd_over_odd_prime => Reduction::Truncate(2),
                (None, None) => return Err(PresentationError::Unbounded(g.name.clone())),
            };
            reductions.push(r);
        }

        let mut ring = RingPresentation {
            prime: p,
            generators: self.generators,
            substitutions,
            weights,
            top_degree_hint: self.top_degree_hint,
            reductions,
        };
        // Normalise substitution targets; processing from the last generator
        // backwards means every target only sees already-normalised rules.
        for i in (0..n).rev() {
            if let Reduction::Substitute { exponent, target } = ring.reductions[i].clone() {
                let reduced = ring.normal_form(&target);
                ring.reductions[i] = if reduced.is_zero() {
                    Reduction::Truncate(exponent)
                } else {
                    Reduction::Substitute {
                        exponent,
                        target: reduced,
                    }
                };
            }
        }
        Ok(ring)
    }
}

impl RingPresentation {
    pub fn builder(prime: u32) -> RingBuilder {
        RingBuilder::new(prime)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn substitutions(&self) -> &BTreeMap<GenIndex, Substitution> {
        &self.substitutions
    }

    pub fn weights(&self) -> &BTreeMap<GenIndex, u32> {
        &self.weights
    }

    /// Declared weight of a generator, defaulting to 1.
    pub fn weight(&self, g: GenIndex) -> u32 {
        self.weights.get(&g).copied().unwrap_or(1)
    }

    pub fn top_degree_hint(&self) -> Option<u32> {
        self.top_degree_hint
    }

    pub fn generator_index(&self, name: &str) -> Option<GenIndex> {
        self.generators.iter().position(|g| g.name == name)
    }

    fn is_odd(&self, g: GenIndex) -> bool {
        self.generators[g].degree % 2 == 1
    }

    /// Exponent at which the generator's own rule fires (truncation or
    /// substitution).
    pub fn relation_exponent(&self, g: GenIndex) -> u32 {
        match &self.reductions[g] {
            Reduction::Truncate(t) => *t,
            Reduction::Substitute { exponent, .. } => *exponent,
        }
    }

    pub fn one(&self) -> Monomial {
        Monomial::new(1, vec![0; self.generators.len()])
    }

    /// The generator itself as a monomial.
    pub fn generator_monomial(&self, g: GenIndex) -> Monomial {
        let mut e = vec![0; self.generators.len()];
        e[g] = 1;
        Monomial::new(1, e)
    }

    pub fn degree(&self, m: &Monomial) -> u32 {
        m.exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// `sum w_i e_i` using the presentation's own weights.
    pub fn weighted_length(&self, m: &Monomial) -> u32 {
        m.exponents
            .iter()
            .enumerate()
            .map(|(i, e)| e * self.weight(i))
            .sum()
    }

    /// Canonical representative of a monomial whose exponent vector is read
    /// as the ordered product `x_1^{e_1} ... x_n^{e_n}`.
    pub fn normal_form(&self, m: &Monomial) -> Monomial {
        if m.is_zero() {
            return Monomial::zero();
        }
        let mut word = Vec::with_capacity(m.length() as usize);
        for (i, &e) in m.exponents.iter().enumerate() {
            word.extend(std::iter::repeat(i).take(e as usize));
        }
        self.reduce_word(word, m.coeff)
    }

    /// Canonical representative of `coeff * f_1 f_2 ... f_k` for an
    /// arbitrary ordered list of generator powers. Reordering two odd-degree
    /// factors contributes a sign.
    pub fn normal_form_word(
        &self,
        coeff: u32,
        factors: &[(GenIndex, u32)],
    ) -> Result<Monomial, AlgebraError> {
        let mut word = Vec::new();
        for &(g, e) in factors {
            if g >= self.generators.len() {
                return Err(AlgebraError::BadIndex(g));
            }
            word.extend(std::iter::repeat(g).take(e as usize));
        }
        Ok(self.reduce_word(word, coeff))
    }

    fn reduce_word(&self, mut word: Vec<GenIndex>, coeff: u32) -> Monomial {
        let p = self.prime;
        let n = self.generators.len();
        let mut coeff = coeff % p;
        loop {
            if coeff == 0 {
                return Monomial::zero();
            }
            if p != 2 {
                // Count transpositions of odd-degree pairs needed to sort.
                let mut inversions = 0usize;
                let mut odd_seen_after = vec![0usize; n];
                for &g in word.iter().rev() {
                    if self.is_odd(g) {
                        inversions += odd_seen_after[..g].iter().sum::<usize>();
                        odd_seen_after[g] += 1;
                    }
                }
                if inversions % 2 == 1 {
                    coeff = p - coeff;
                }
            }
            let mut exps = vec![0u32; n];
            for &g in &word {
                exps[g] += 1;
            }
            let truncated = exps
                .iter()
                .zip(&self.reductions)
                .any(|(e, r)| matches!(r, Reduction::Truncate(t) if e >= t));
            if truncated {
                return Monomial::zero();
            }
            let fire = exps.iter().zip(&self.reductions).position(
                |(e, r)| matches!(r, Reduction::Substitute { exponent, .. } if e >= exponent),
            );
            let Some(i) = fire else {
                return Monomial::new(coeff, exps);
            };
            let Reduction::Substitute { exponent, target } = &self.reductions[i] else {
                unreachable!()
            };
            // Replace the trailing x_i^t block by the target, in place.
            word.clear();
            for (k, &e) in exps.iter().enumerate() {
                let e = if k == i { e - exponent } else { e };
                word.extend(std::iter::repeat(k).take(e as usize));
                if k == i {
                    for (tk, &te) in target.exponents.iter().enumerate() {
                        word.extend(std::iter::repeat(tk).take(te as usize));
                    }
                }
            }
            coeff = coeff * target.coeff % p;
        }
    }

    /// Product of two monomials (in that order), normalised.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Monomial {
        if a.is_zero() || b.is_zero() {
            return Monomial::zero();
        }
        let mut word = Vec::with_capacity((a.length() + b.length()) as usize);
        for m in [a, b] {
            for (i, &e) in m.exponents.iter().enumerate() {
                word.extend(std::iter::repeat(i).take(e as usize));
            }
        }
        self.reduce_word(word, a.coeff * b.coeff % self.prime)
    }

    pub fn element(&self, m: &Monomial) -> Element {
        let mut el = Element::zero();
        el.accumulate(self.normal_form(m), self.prime);
        el
    }

    pub fn add(&self, u: &Element, v: &Element) -> Element {
        let mut out = u.clone();
        for t in v.terms() {
            out.accumulate(t, self.prime);
        }
        out
    }

    /// Cup product: distribute, normalise each term, merge like terms mod p.
    pub fn multiply(&self, u: &Element, v: &Element) -> Element {
        let mut out = Element::zero();
        for a in u.terms() {
            for b in v.terms() {
                out.accumulate(self.multiply_monomials(&a, &b), self.prime);
            }
        }
        out
    }

    fn nilpotency_cap(&self, g: GenIndex) -> u32 {
        match self.top_degree_hint {
            Some(top) => top.div_ceil(self.generators[g].degree) + 1,
            None => (0..self.generators.len())
                .map(|i| self.relation_exponent(i))
                .fold(1u32, |acc, t| acc.saturating_mul(t)),
        }
    }

    /// Least `t >= 1` with `g^t = 0`.
    pub fn nilpotency_order(&self, g: GenIndex) -> Result<u32, AlgebraError> {
        if g >= self.generators.len() {
            return Err(AlgebraError::BadIndex(g));
        }
        let cap = self.nilpotency_cap(g);
        let x = self.generator_monomial(g);
        let mut power = self.one();
        for t in 1..=cap {
            power = self.multiply_monomials(&power, &x);
            if power.is_zero() {
                return Ok(t);
            }
        }
        Err(AlgebraError::NonNilpotent {
            gen: self.generators[g].name.clone(),
            cap,
        })
    }

    /// Renders an exponent vector as `x1^7 x3^1`, or `1` when empty.
    pub fn format_exponents(&self, exponents: &[u32]) -> String {
        let parts: Vec<String> = exponents
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| format!("{}^{}", g.name, e))
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" ")
        }
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_zero() {
            return "0".to_string();
        }
        let body = self.format_exponents(&m.exponents);
        if m.coeff == 1 {
            body
        } else {
            format!("{}*{}", m.coeff, body)
        }
    }

    /// Disjoint union of two presentations over the same prime (tensor
    /// product of the algebras). Generator names of `other` are prefixed
    /// when they collide.
    pub fn tensor(&self, other: &RingPresentation) -> Option<RingPresentation> {
        if self.prime != other.prime {
            return None;
        }
        let offset = self.generators.len();
        let mut generators = self.generators.clone();
        for g in &other.generators {
            let mut g = g.clone();
            while generators.iter().any(|h| h.name == g.name) {
                g.name = format!("{}'", g.name);
            }
            generators.push(g);
        }
        let n = generators.len();
        let shift = |m: &Monomial, off: usize| {
            if m.is_zero() {
                return m.clone();
            }
            let mut e = vec![0; n];
            for (i, &x) in m.exponents.iter().enumerate() {
                e[i + off] = x;
            }
            Monomial::new(m.coeff, e)
        };
        let mut substitutions = BTreeMap::new();
        let mut reductions = Vec::with_capacity(n);
        for (src, off) in [(self, 0usize), (other, offset)] {
            for (i, s) in &src.substitutions {
                substitutions.insert(
                    i + off,
                    Substitution {
                        exponent: s.exponent,
                        target: s.target.as_ref().map(|m| shift(m, off)),
                    },
                );
            }
            for r in &src.reductions {
                reductions.push(match r {
                    Reduction::Truncate(t) => Reduction::Truncate(*t),
                    Reduction::Substitute { exponent, target } => Reduction::Substitute {
                        exponent: *exponent,
                        target: shift(target, off),
                    },
                });
            }
        }
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().map(|(i, w)| (i + offset, *w)));
        let top_degree_hint = match (self.top_degree_hint, other.top_degree_hint) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Some(RingPresentation {
            prime: self.prime,
            generators,
            substitutions,
            weights,
            top_degree_hint,
            reductions,
        })
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}[", self.prime)?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", g.name, g.degree)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pu2_like(r: u32) -> RingPresentation {
        RingPresentation::builder(2)
            .generator("x1", 1, None)
            .substitution("x1", 2, 1, &[("x2", 1)])
            .generator("x2", 2, Some(1 << r))
            .build()
            .unwrap()
    }

    #[test]
    fn odd_transposition_over_z3() {
        let r = RingPresentation::builder(3)
            .exterior("x1", 1)
            .exterior("x3", 3)
            .build()
            .unwrap();
        let m = r.normal_form_word(1, &[(1, 1), (0, 1)]).unwrap();
        assert_eq!(m, Monomial::new(2, vec![1, 1]));
    }

    #[test]
    fn substitution_chain_reaches_zero() {
        let r = pu2_like(2);
        let x1_8 = Monomial::new(1, vec![8, 0]);
        assert!(r.normal_form(&x1_8).is_zero());
        let x1_7 = Monomial::new(1, vec![7, 0]);
        assert_eq!(r.normal_form(&x1_7), Monomial::new(1, vec![1, 3]));
        assert_eq!(r.nilpotency_order(0).unwrap(), 8);
    }

    #[test]
    fn odd_square_vanishes_over_z5() {
        let r = RingPresentation::builder(5)
            .generator("x1", 1, None)
            .build()
            .unwrap();
        assert!(r.normal_form(&Monomial::new(1, vec![2])).is_zero());
        assert_eq!(r.nilpotency_order(0).unwrap(), 2);
    }

    #[test]
    fn cross_terms_cancel_mod_two() {
        let r = RingPresentation::builder(2)
            .exterior("x1", 1)
            .exterior("x3", 3)
            .build()
            .unwrap();
        let u = r.add(
            &r.element(&r.generator_monomial(0)),
            &r.element(&r.generator_monomial(1)),
        );
        assert_eq!(u.len(), 2);
        assert!(r.multiply(&u, &u).is_zero());
        let one = r.element(&r.one());
        assert_eq!(r.multiply(&u, &one), u);
    }

    #[test]
    fn truncated_square() {
        let r = RingPresentation::builder(2)
            .generator("x1", 1, Some(4))
            .build()
            .unwrap();
        let sq = r.element(&Monomial::new(1, vec![2]));
        assert!(r.multiply(&sq, &sq).is_zero());
    }

    #[test]
    fn nilpotency_orders() {
        let r = RingPresentation::builder(2)
            .generator("x2", 2, Some(4))
            .exterior("x3", 3)
            .build()
            .unwrap();
        assert_eq!(r.nilpotency_order(0).unwrap(), 4);
        assert_eq!(r.nilpotency_order(1).unwrap(), 2);
        for k in 1..=4 {
            assert_eq!(pu2_like(k).nilpotency_order(0).unwrap(), 1 << (k + 1));
        }
    }

    #[test]
    fn wrong_hint_detected() {
        let r = RingPresentation::builder(2)
            .generator("x1", 1, Some(8))
            .top_degree(3)
            .build()
            .unwrap();
        assert!(matches!(
            r.nilpotency_order(0),
            Err(AlgebraError::NonNilpotent { cap: 4, .. })
        ));
    }

    #[test]
    fn validation_errors() {
        use PresentationError::*;
        let b = || RingPresentation::builder(2);
        assert_eq!(RingPresentation::builder(1).build(), Err(NotPrime(1)));
        assert_eq!(RingPresentation::builder(4).build(), Err(NotPrime(4)));
        assert!(matches!(
            b().generator("x", 0, Some(2)).build(),
            Err(DegreeZero(_))
        ));
        assert!(matches!(
            b().generator("x", 2, None).build(),
            Err(Unbounded(_))
        ));
        assert!(matches!(
            b().generator("x", 1, Some(1)).build(),
            Err(TruncationTooSmall { .. })
        ));
        assert!(matches!(
            b().generator("y", 2, Some(2))
                .generator("x", 1, None)
                .substitution("x", 2, 1, &[("y", 1)])
                .build(),
            Err(SubstitutionOrder { .. })
        ));
        assert!(matches!(
            b().generator("x", 1, None)
                .generator("y", 4, Some(2))
                .substitution("x", 2, 1, &[("y", 1)])
                .build(),
            Err(DegreeMismatch { .. })
        ));
        assert!(matches!(
            b().generator("x", 1, Some(4))
                .generator("y", 2, Some(2))
                .substitution("x", 2, 1, &[("y", 1)])
                .build(),
            Err(ConflictingRelations(_))
        ));
        assert!(matches!(
            RingPresentation::builder(3)
                .generator("x", 1, None)
                .generator("y", 2, Some(3))
                .substitution("x", 2, 1, &[("y", 1)])
                .build(),
            Err(OddSquareNonzero(_))
        ));
        assert!(matches!(
            b().generator("x", 1, Some(2)).weight("x", 0).build(),
            Err(ZeroWeight(_))
        ));
    }

    #[test]
    fn formatting() {
        let r = pu2_like(1);
        assert_eq!(r.format_exponents(&[3, 0]), "x1^3");
        assert_eq!(r.format_exponents(&[0, 0]), "1");
        assert_eq!(r.format_monomial(&Monomial::zero()), "0");
    }
}
