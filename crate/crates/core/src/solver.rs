//! Interval propagation for `cup <= sigmacat <= cat <= Cat`.
//!
//! Each space carries one [`BoundInterval`] per invariant. Rule instances
//! are derived once from the catalog; each proposes bounds from the current
//! state and is applied as a monotone meet (upper) or join (lower). The loop
//! stops when a full pass changes nothing, so the fixpoint does not depend on
//! the order of the instances.

use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::catalog::{Catalog, SpaceFact};
use crate::cone::{self, Refusal};
use crate::cup::{self, WeightAssignment, DEFAULT_MAX_SEARCH};
use crate::dsl::{FactInvariant, KnownFact, Qualifier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Invariant {
    #[serde(rename = "cup")]
    Cup,
    #[serde(rename = "sigmacat")]
    SigmaCat,
    #[serde(rename = "cat")]
    Cat,
    #[serde(rename = "Cat")]
    StrongCat,
}

impl Invariant {
    /// In chain order: each bounds the next from below.
    pub const ALL: [Invariant; 4] = [
        Invariant::Cup,
        Invariant::SigmaCat,
        Invariant::Cat,
        Invariant::StrongCat,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Invariant::Cup => "cup",
            Invariant::SigmaCat => "sigmacat",
            Invariant::Cat => "cat",
            Invariant::StrongCat => "Cat",
        }
    }

    /// `wcat` has no counterpart: it is recorded but never propagated.
    pub fn from_fact(f: FactInvariant) -> Option<Self> {
        match f {
            FactInvariant::Cup => Some(Invariant::Cup),
            FactInvariant::SigmaCat => Some(Invariant::SigmaCat),
            FactInvariant::Cat => Some(Invariant::Cat),
            FactInvariant::StrongCat => Some(Invariant::StrongCat),
            FactInvariant::WCat => None,
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// `[lower, upper]`; `upper = None` is infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundInterval {
    pub lower: u32,
    pub upper: Option<u32>,
}

impl Default for BoundInterval {
    fn default() -> Self {
        BoundInterval {
            lower: 0,
            upper: None,
        }
    }
}

impl BoundInterval {
    pub fn is_determined(&self) -> bool {
        self.upper == Some(self.lower)
    }

    pub fn value(&self) -> Option<u32> {
        self.is_determined().then_some(self.lower)
    }
}

impl fmt::Display for BoundInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) if u == self.lower => write!(f, "{u}"),
            Some(u) => write!(f, "[{},{}]", self.lower, u),
            None => write!(f, "[{},inf)", self.lower),
        }
    }
}

impl Serialize for BoundInterval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("lower", &self.lower)?;
        m.serialize_entry("upper", &self.upper)?;
        m.serialize_entry("determined", &self.is_determined())?;
        m.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    RingCup,
    RingWeight,
    OrderChain,
    JamesGanea,
    ConeLength,
    MainTheorem,
    GeneralBundle,
    Product,
    KnownFact,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::RingCup => "ring-cup",
            Rule::RingWeight => "ring-weight",
            Rule::OrderChain => "order-chain",
            Rule::JamesGanea => "james-ganea",
            Rule::ConeLength => "cone-length",
            Rule::MainTheorem => "main-theorem",
            Rule::GeneralBundle => "general-bundle",
            Rule::Product => "product",
            Rule::KnownFact => "known-fact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ProvenanceEntry {
    pub invariant: Invariant,
    pub side: Side,
    pub value: u32,
    pub rule: Rule,
    /// The declaration (or neighbouring bound) the value was read from.
    pub source: String,
    pub citation: Option<String>,
}

impl fmt::Display for ProvenanceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.side {
            Side::Lower => ">=",
            Side::Upper => "<=",
        };
        write!(
            f,
            "{} {op} {} by {} from {}",
            self.invariant,
            self.value,
            self.rule.name(),
            self.source
        )?;
        if let Some(c) = &self.citation {
            write!(f, " [{c}]")?;
        }
        Ok(())
    }
}

/// A bound that would have emptied an interval, with the entry it clashed
/// with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub invariant: Invariant,
    pub existing: ProvenanceEntry,
    pub incoming: ProvenanceEntry,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contradiction on {}: {} conflicts with {}",
            self.invariant, self.incoming, self.existing
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceRecord {
    pub name: String,
    pub intervals: [BoundInterval; 4],
    pub loopspace_even: bool,
    /// Declared `wcat` facts, kept for reference only.
    pub wcat: Vec<KnownFact>,
    /// Every rule instance whose proposal equals a final bound.
    pub provenance: Vec<ProvenanceEntry>,
    /// Updates in the order they were applied.
    pub trail: Vec<ProvenanceEntry>,
    pub contradiction: Option<Contradiction>,
}

impl SpaceRecord {
    fn new(name: &str, loopspace_even: bool) -> Self {
        SpaceRecord {
            name: name.to_string(),
            intervals: [BoundInterval::default(); 4],
            loopspace_even,
            wcat: Vec::new(),
            provenance: Vec::new(),
            trail: Vec::new(),
            contradiction: None,
        }
    }

    pub fn interval(&self, inv: Invariant) -> BoundInterval {
        self.intervals[inv.index()]
    }

    pub fn is_halted(&self) -> bool {
        self.contradiction.is_some()
    }

    fn last_entry(&self, inv: Invariant, side: Side) -> Option<&ProvenanceEntry> {
        self.trail
            .iter()
            .rev()
            .find(|e| e.invariant == inv && e.side == side)
    }

    /// Tightens one side; returns whether the record changed.
    fn apply(&mut self, e: ProvenanceEntry) -> bool {
        if self.is_halted() {
            return false;
        }
        let iv = self.intervals[e.invariant.index()];
        let (improves, clashes) = match e.side {
            Side::Lower => (e.value > iv.lower, iv.upper.is_some_and(|u| e.value > u)),
            Side::Upper => (iv.upper.map_or(true, |u| e.value < u), e.value < iv.lower),
        };
        if !improves {
            return false;
        }
        if clashes {
            let other = match e.side {
                Side::Lower => Side::Upper,
                Side::Upper => Side::Lower,
            };
            let existing = self
                .last_entry(e.invariant, other)
                .cloned()
                .unwrap_or_else(|| ProvenanceEntry {
                    invariant: e.invariant,
                    side: other,
                    value: match other {
                        Side::Lower => iv.lower,
                        Side::Upper => iv.upper.unwrap_or(u32::MAX),
                    },
                    rule: Rule::OrderChain,
                    source: "initial".to_string(),
                    citation: None,
                });
            self.contradiction = Some(Contradiction {
                invariant: e.invariant,
                existing,
                incoming: e,
            });
            return true;
        }
        let slot = &mut self.intervals[e.invariant.index()];
        match e.side {
            Side::Lower => slot.lower = e.value,
            Side::Upper => slot.upper = Some(e.value),
        }
        self.trail.push(e);
        true
    }
}

/// One concrete application site of a rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleInstance {
    RingCup {
        space: String,
        ring: String,
        value: u32,
        witness: String,
        complete: Option<String>,
    },
    RingWeight {
        space: String,
        ring: String,
        value: u32,
        witness: String,
    },
    OrderChain {
        space: String,
    },
    JamesGanea {
        space: String,
        dim: u32,
        d: u32,
    },
    ConeLength {
        bundle: String,
        fiber: String,
        m: u32,
        citation: Option<String>,
    },
    MainTheorem {
        bundle: String,
        total: String,
        bound: u32,
        citation: Option<String>,
    },
    GeneralBundle {
        bundle: String,
        total: String,
        fiber: String,
        base: String,
    },
    Product {
        product: String,
        total: String,
        factors: Vec<String>,
        citation: Option<String>,
    },
    Known {
        space: String,
        fact: SpaceFact,
    },
}

fn entry(
    invariant: Invariant,
    side: Side,
    value: u32,
    rule: Rule,
    source: String,
    citation: Option<String>,
) -> ProvenanceEntry {
    ProvenanceEntry {
        invariant,
        side,
        value,
        rule,
        source,
        citation,
    }
}

fn strong_upper(state: &BTreeMap<String, SpaceRecord>, space: &str) -> Option<u32> {
    state
        .get(space)
        .and_then(|r| r.interval(Invariant::StrongCat).upper)
}

impl RuleInstance {
    /// Bounds this instance asserts given `state`, keyed by space.
    pub fn proposals(&self, state: &BTreeMap<String, SpaceRecord>) -> Vec<(String, ProvenanceEntry)> {
        use Invariant::*;
        match self {
            RuleInstance::RingCup {
                space,
                ring,
                value,
                witness,
                complete,
            } => {
                let source = format!("ring {ring}: {witness}");
                let mut out = vec![(
                    space.clone(),
                    entry(Cup, Side::Lower, *value, Rule::RingCup, source.clone(), None),
                )];
                if let Some(c) = complete {
                    out.push((
                        space.clone(),
                        entry(Cup, Side::Upper, *value, Rule::RingCup, source, Some(c.clone())),
                    ));
                }
                out
            }
            RuleInstance::RingWeight {
                space,
                ring,
                value,
                witness,
            } => vec![(
                space.clone(),
                entry(
                    SigmaCat,
                    Side::Lower,
                    *value,
                    Rule::RingWeight,
                    format!("ring {ring}: {witness}"),
                    None,
                ),
            )],
            RuleInstance::OrderChain { space } => {
                let Some(rec) = state.get(space) else {
                    return Vec::new();
                };
                let mut out = Vec::new();
                for w in Invariant::ALL.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let a = rec.interval(lo);
                    let b = rec.interval(hi);
                    out.push((
                        space.clone(),
                        entry(hi, Side::Lower, a.lower, Rule::OrderChain, format!("{lo}.lower"), None),
                    ));
                    if let Some(u) = b.upper {
                        out.push((
                            space.clone(),
                            entry(lo, Side::Upper, u, Rule::OrderChain, format!("{hi}.upper"), None),
                        ));
                    }
                }
                out
            }
            RuleInstance::JamesGanea { space, dim, d } => vec![(
                space.clone(),
                entry(
                    StrongCat,
                    Side::Upper,
                    cone::james_ganea_bound(*dim, *d),
                    Rule::JamesGanea,
                    format!("dim {dim}, {}-connected", d - 1),
                    None,
                ),
            )],
            RuleInstance::ConeLength {
                bundle,
                fiber,
                m,
                citation,
            } => vec![(
                fiber.clone(),
                entry(
                    StrongCat,
                    Side::Upper,
                    *m,
                    Rule::ConeLength,
                    format!("bundle {bundle}"),
                    citation.clone(),
                ),
            )],
            RuleInstance::MainTheorem {
                bundle,
                total,
                bound,
                citation,
            } => vec![(
                total.clone(),
                entry(
                    StrongCat,
                    Side::Upper,
                    *bound,
                    Rule::MainTheorem,
                    format!("bundle {bundle}"),
                    citation.clone(),
                ),
            )],
            RuleInstance::GeneralBundle {
                bundle,
                total,
                fiber,
                base,
            } => match (strong_upper(state, fiber), strong_upper(state, base)) {
                (Some(f), Some(b)) => vec![(
                    total.clone(),
                    entry(
                        StrongCat,
                        Side::Upper,
                        cone::general_bundle_bound(f, b),
                        Rule::GeneralBundle,
                        format!("bundle {bundle}"),
                        None,
                    ),
                )],
                _ => Vec::new(),
            },
            RuleInstance::Product {
                product,
                total,
                factors,
                citation,
            } => {
                let mut sum = 0u32;
                for f in factors {
                    match strong_upper(state, f) {
                        Some(u) => sum = cone::product_bound(sum, u),
                        None => return Vec::new(),
                    }
                }
                vec![(
                    total.clone(),
                    entry(
                        StrongCat,
                        Side::Upper,
                        sum,
                        Rule::Product,
                        format!("product {product}"),
                        citation.clone(),
                    ),
                )]
            }
            RuleInstance::Known { space, fact } => {
                let Some(inv) = Invariant::from_fact(fact.fact.invariant) else {
                    return Vec::new();
                };
                let make = |side| {
                    (
                        space.clone(),
                        entry(
                            inv,
                            side,
                            fact.fact.value,
                            Rule::KnownFact,
                            format!("fact {}", fact.declared_in),
                            Some(fact.fact.citation.clone()),
                        ),
                    )
                };
                match fact.fact.qualifier {
                    Qualifier::Lower => vec![make(Side::Lower)],
                    Qualifier::Upper => vec![make(Side::Upper)],
                    Qualifier::Exact => vec![make(Side::Lower), make(Side::Upper)],
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Cap on exponent vectors visited per ring search.
    pub max_search: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_search: DEFAULT_MAX_SEARCH,
        }
    }
}

/// A ring search that could not run; the corresponding rule is skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchFailure {
    pub space: String,
    pub ring: String,
    pub message: String,
}

/// Everything derived from a catalog before propagation starts.
#[derive(Debug, Clone)]
pub struct RulePlan {
    pub instances: Vec<RuleInstance>,
    pub refusals: Vec<Refusal>,
    pub search_failures: Vec<SearchFailure>,
}

/// Derives the rule instances of `catalog`, running every ring search once.
pub fn plan(catalog: &Catalog, opts: &SolverOptions) -> RulePlan {
    let mut instances = Vec::new();
    let mut refusals = Vec::new();
    let mut search_failures = Vec::new();

    for space in catalog.spaces.values() {
        instances.push(RuleInstance::OrderChain {
            space: space.name.clone(),
        });
        if let Some(entry) = catalog.ring_of(&space.name) {
            let ring = &entry.presentation;
            let fail = |e: cup::CupError| SearchFailure {
                space: space.name.clone(),
                ring: entry.name.clone(),
                message: e.to_string(),
            };
            match cup::cup_length(ring, opts.max_search) {
                Ok(r) => instances.push(RuleInstance::RingCup {
                    space: space.name.clone(),
                    ring: entry.name.clone(),
                    value: r.value,
                    witness: ring.format_exponents(&r.witness),
                    complete: entry.complete.clone(),
                }),
                Err(e) => search_failures.push(fail(e)),
            }
            let weights = WeightAssignment::for_space(ring, space.loopspace_even);
            match cup::weighted_wgt_lower(ring, &weights, opts.max_search) {
                Ok(r) => instances.push(RuleInstance::RingWeight {
                    space: space.name.clone(),
                    ring: entry.name.clone(),
                    value: r.value,
                    witness: ring.format_exponents(&r.witness),
                }),
                Err(e) => search_failures.push(fail(e)),
            }
        }
        if let (Some(dim), Some(c)) = (space.dim, space.connectivity) {
            instances.push(RuleInstance::JamesGanea {
                space: space.name.clone(),
                dim,
                d: c + 1,
            });
        }
        for fact in &space.facts {
            instances.push(RuleInstance::Known {
                space: space.name.clone(),
                fact: fact.clone(),
            });
        }
    }

    for b in catalog.bundles.values() {
        instances.push(RuleInstance::ConeLength {
            bundle: b.name.clone(),
            fiber: b.fiber.clone(),
            m: b.fiber_decomposition.length(),
            citation: b.citation.clone(),
        });
        match cone::main_theorem_bound(b) {
            Ok(bound) => instances.push(RuleInstance::MainTheorem {
                bundle: b.name.clone(),
                total: b.total.clone(),
                bound,
                citation: b.citation.clone(),
            }),
            Err(r) => refusals.push(r),
        }
        instances.push(RuleInstance::GeneralBundle {
            bundle: b.name.clone(),
            total: b.total.clone(),
            fiber: b.fiber.clone(),
            base: b.base.clone(),
        });
    }

    for p in catalog.products.values() {
        instances.push(RuleInstance::Product {
            product: p.name.clone(),
            total: p.total.clone(),
            factors: p.factors.clone(),
            citation: p.citation.clone(),
        });
    }

    RulePlan {
        instances,
        refusals,
        search_failures,
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub spaces: BTreeMap<String, SpaceRecord>,
    pub refusals: Vec<Refusal>,
    pub search_failures: Vec<SearchFailure>,
    /// Full passes over the rule instances, including the final quiet one.
    pub passes: usize,
}

impl Solution {
    pub fn contradictions(&self) -> impl Iterator<Item = (&str, &Contradiction)> {
        self.spaces
            .values()
            .filter_map(|r| r.contradiction.as_ref().map(|c| (r.name.as_str(), c)))
    }

    /// The final intervals of every space, for comparing fixpoints.
    pub fn fixpoint(&self) -> BTreeMap<String, [BoundInterval; 4]> {
        self.spaces
            .iter()
            .map(|(n, r)| (n.clone(), r.intervals))
            .collect()
    }
}

/// Propagates to the fixpoint with the default options and rule order.
pub fn propagate(catalog: &Catalog) -> Solution {
    propagate_with(catalog, &SolverOptions::default(), None)
}

/// Propagates with the rule instances shuffled by `seed`, if given.
pub fn propagate_with(catalog: &Catalog, opts: &SolverOptions, seed: Option<u64>) -> Solution {
    let mut plan = plan(catalog, opts);
    if let Some(seed) = seed {
        plan.instances.shuffle(&mut StdRng::seed_from_u64(seed));
    }
    solve(catalog, plan)
}

/// Runs the instances of `plan` in the given order until nothing changes.
pub fn solve(catalog: &Catalog, plan: RulePlan) -> Solution {
    let mut state: BTreeMap<String, SpaceRecord> = catalog
        .spaces
        .values()
        .map(|s| {
            let mut rec = SpaceRecord::new(&s.name, s.loopspace_even);
            rec.wcat = s
                .facts
                .iter()
                .filter(|f| f.fact.invariant == FactInvariant::WCat)
                .map(|f| f.fact.clone())
                .collect();
            (s.name.clone(), rec)
        })
        .collect();

    let mut passes = 0;
    loop {
        passes += 1;
        let mut changed = false;
        for inst in &plan.instances {
            for (space, e) in inst.proposals(&state) {
                if let Some(rec) = state.get_mut(&space) {
                    changed |= rec.apply(e);
                }
            }
        }
        if !changed {
            break;
        }
    }

    // Provenance is read off the fixpoint rather than the trail, so it does
    // not depend on the order in which rules happened to fire.
    let mut provenance: BTreeMap<String, Vec<ProvenanceEntry>> = BTreeMap::new();
    for inst in &plan.instances {
        for (space, e) in inst.proposals(&state) {
            let Some(rec) = state.get(&space) else { continue };
            let iv = rec.interval(e.invariant);
            let tight = match e.side {
                Side::Lower => e.value > 0 && e.value == iv.lower,
                Side::Upper => iv.upper == Some(e.value),
            };
            if tight {
                provenance.entry(space).or_default().push(e);
            }
        }
    }
    for rec in state.values_mut() {
        let mut p = if rec.is_halted() {
            rec.trail.clone()
        } else {
            provenance.remove(&rec.name).unwrap_or_default()
        };
        p.sort();
        p.dedup();
        rec.provenance = p;
    }

    Solution {
        spaces: state,
        refusals: plan.refusals,
        search_failures: plan.search_failures,
        passes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GaneaRule {
    /// `cat = cup`.
    CatEqualsCup,
    /// `cat = sigmacat`.
    CatEqualsSigmaCat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaneaStatus {
    Holds(GaneaRule),
    Unknown,
}

impl GaneaStatus {
    pub fn label(self) -> &'static str {
        match self {
            GaneaStatus::Holds(_) => "holds",
            GaneaStatus::Unknown => "unknown",
        }
    }
}

impl fmt::Display for GaneaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaneaStatus::Holds(GaneaRule::CatEqualsCup) => f.write_str("holds (cat = cup)"),
            GaneaStatus::Holds(GaneaRule::CatEqualsSigmaCat) => {
                f.write_str("holds (cat = sigmacat)")
            }
            GaneaStatus::Unknown => f.write_str("unknown"),
        }
    }
}

/// Never reports failure: a gap between the bounds only means the criterion
/// does not apply.
pub fn ganea_check(rec: &SpaceRecord) -> GaneaStatus {
    if rec.is_halted() {
        return GaneaStatus::Unknown;
    }
    let Some(cat) = rec.interval(Invariant::Cat).value() else {
        return GaneaStatus::Unknown;
    };
    if rec.interval(Invariant::Cup).value() == Some(cat) {
        GaneaStatus::Holds(GaneaRule::CatEqualsCup)
    } else if rec.interval(Invariant::SigmaCat).value() == Some(cat) {
        GaneaStatus::Holds(GaneaRule::CatEqualsSigmaCat)
    } else {
        GaneaStatus::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::link;
    use crate::dsl::parse;

    fn solve_text(text: &str) -> Solution {
        let doc = parse(text);
        assert!(doc.is_ok(), "{:?}", doc.diagnostics);
        propagate(&link(&[doc]).unwrap())
    }

    fn iv(lower: u32, upper: Option<u32>) -> BoundInterval {
        BoundInterval { lower, upper }
    }

    #[test]
    fn empty_catalog() {
        let s = propagate(&Catalog::default());
        assert!(s.spaces.is_empty());
    }

    #[test]
    fn cup_meets_cone_bound() {
        let s = solve_text(
            "ring R over Z/2 { gen x : deg 1 trunc 4; complete from \"full ring\"; }\n\
             space X { dim 3; connectivity 0; cohomology R; }",
        );
        let x = &s.spaces["X"];
        for inv in Invariant::ALL {
            assert_eq!(x.interval(inv), iv(3, Some(3)), "{inv}");
        }
        assert_eq!(ganea_check(x), GaneaStatus::Holds(GaneaRule::CatEqualsCup));
        assert!(x
            .provenance
            .iter()
            .any(|e| e.rule == Rule::JamesGanea && e.invariant == Invariant::StrongCat));
    }

    #[test]
    fn incomplete_ring_leaves_cup_open() {
        let s = solve_text(
            "ring R over Z/3 { gen a : deg 1 exterior; gen b : deg 2 trunc 3; }\n\
             space X { dim 8; connectivity 0; cohomology R; loopspace-even; known Cat = 6 from \"c\"; }",
        );
        let x = &s.spaces["X"];
        assert_eq!(x.interval(Invariant::Cup), iv(3, Some(6)));
        assert_eq!(x.interval(Invariant::SigmaCat), iv(5, Some(6)));
        assert_eq!(ganea_check(x), GaneaStatus::Unknown);
    }

    #[test]
    fn wide_cat_interval_is_unknown() {
        let s = solve_text("space X { known lower cat = 2 from \"a\"; known upper cat = 3 from \"b\"; }");
        let x = &s.spaces["X"];
        assert_eq!(x.interval(Invariant::Cat), iv(2, Some(3)));
        assert_eq!(x.interval(Invariant::Cup), iv(0, Some(3)));
        assert_eq!(x.interval(Invariant::StrongCat), iv(2, None));
        assert_eq!(ganea_check(x), GaneaStatus::Unknown);
    }

    #[test]
    fn contradiction_halts_only_that_space() {
        let s = solve_text(
            "space X { known lower cup = 5 from \"high\"; known upper Cat = 2 from \"low\"; }\n\
             space Y { known cat = 1 from \"ok\"; known cup = 1 from \"ok\"; }",
        );
        let (name, c) = s.contradictions().next().unwrap();
        assert_eq!(name, "X");
        assert_eq!(c.existing.invariant, c.incoming.invariant);
        assert_ne!(c.existing.side, c.incoming.side);
        let (lo, hi) = match c.incoming.side {
            Side::Lower => (&c.incoming, &c.existing),
            Side::Upper => (&c.existing, &c.incoming),
        };
        assert!(lo.value > hi.value);
        let trail = &s.spaces["X"].trail;
        assert!(trail.iter().any(|e| e.citation.as_deref() == Some("high"))
            || trail.iter().any(|e| e.citation.as_deref() == Some("low")));
        assert_eq!(s.contradictions().count(), 1);
        assert_eq!(
            ganea_check(&s.spaces["Y"]),
            GaneaStatus::Holds(GaneaRule::CatEqualsCup)
        );
        for inv in Invariant::ALL {
            let i = s.spaces["X"].interval(inv);
            assert!(i.upper.map_or(true, |u| i.lower <= u));
        }
    }

    #[test]
    fn wcat_is_recorded_not_propagated() {
        let s = solve_text("space X { known wcat = 4 from \"w\"; }");
        let x = &s.spaces["X"];
        assert_eq!(x.wcat.len(), 1);
        assert!(Invariant::ALL.iter().all(|&i| x.interval(i) == iv(0, None)));
    }

    #[test]
    fn bundle_and_product_rules() {
        let text = "space F { dim 3; connectivity 2; }\n\
                    space B { dim 7; connectivity 0; }\n\
                    space E { }\n\
                    space S { dim 7; connectivity 6; }\n\
                    space P { }\n\
                    bundle FEB { total E; fiber F; base B; structure-group F; cells-mod d 1 s 0;\n\
                      stage 1 : \"S^2\" dim 3 skeletal; compatibility skeletal; }\n\
                    product ES { total P; factor E; factor S; }";
        let s = solve_text(text);
        assert_eq!(s.spaces["E"].interval(Invariant::StrongCat).upper, Some(8));
        assert_eq!(s.spaces["P"].interval(Invariant::StrongCat).upper, Some(9));
        let refused = text.replace("compatibility skeletal", "compatibility none");
        let s = solve_text(&refused);
        assert_eq!(s.refusals.len(), 1);
        // (1 + 1)(7 + 1) - 1
        assert_eq!(s.spaces["E"].interval(Invariant::StrongCat).upper, Some(15));
    }

    #[test]
    fn seeds_agree() {
        let text = "ring R over Z/2 { gen x : deg 1 trunc 8; gen y : deg 3 exterior; complete from \"r\"; }\n\
                    space F { dim 3; connectivity 2; }\n\
                    space B { dim 7; connectivity 0; }\n\
                    space E { dim 10; connectivity 0; cohomology R; }\n\
                    bundle FEB { total E; fiber F; base B; structure-group F; cells-mod d 1 s 0;\n\
                      stage 1 : \"S^2\" dim 3 skeletal; compatibility skeletal; }";
        let cat = link(&[parse(text)]).unwrap();
        let base = propagate(&cat);
        assert_eq!(base.spaces["E"].interval(Invariant::Cat), iv(8, Some(8)));
        for seed in 0..20 {
            let s = propagate_with(&cat, &SolverOptions::default(), Some(seed));
            assert_eq!(s.fixpoint(), base.fixpoint());
            for (n, r) in &s.spaces {
                assert_eq!(r.provenance, base.spaces[n].provenance);
            }
        }
    }
}
