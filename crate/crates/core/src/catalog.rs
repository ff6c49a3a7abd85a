//! Linking parsed documents into a [`Catalog`] with every cross-reference
//! resolved.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{PresentationError, RingPresentation};
use crate::cone::{
    BundleRecord, CompatibilityCertificate, ConeDecomposition, ConeError, ConeStage,
    TRIVIAL_GROUP,
};
use crate::dsl::{
    CertificateDecl, DeclKind, Declaration, FactDecl, KnownFact, RelTarget, RingDecl,
    SourceDocument,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingEntry {
    pub name: String,
    pub presentation: RingPresentation,
    /// Source for the claim that this ring realises the cup-length of any
    /// space using it.
    pub complete: Option<String>,
}

/// A `known` fact attached to a space, with the declaration it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SpaceFact {
    pub fact: KnownFact,
    pub declared_in: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Space {
    pub name: String,
    pub dim: Option<u32>,
    pub connectivity: Option<u32>,
    pub ring: Option<String>,
    pub loopspace_even: bool,
    /// Sorted, so the order of declarations does not matter.
    pub facts: Vec<SpaceFact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductRecord {
    pub name: String,
    pub total: String,
    pub factors: Vec<String>,
    pub citation: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Catalog {
    pub rings: BTreeMap<String, RingEntry>,
    pub spaces: BTreeMap<String, Space>,
    pub bundles: BTreeMap<String, BundleRecord>,
    pub products: BTreeMap<String, ProductRecord>,
    pub facts: BTreeMap<String, FactDecl>,
}

impl Catalog {
    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
            && self.spaces.is_empty()
            && self.bundles.is_empty()
            && self.products.is_empty()
            && self.facts.is_empty()
    }

    pub fn ring_of(&self, space: &str) -> Option<&RingEntry> {
        let name = self.spaces.get(space)?.ring.as_ref()?;
        self.rings.get(name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Error)]
pub enum LinkError {
    #[error("{path}: document has {count} parse error(s)")]
    DocumentHasErrors { path: String, count: usize },
    #[error("`{name}` is declared more than once")]
    DuplicateName { name: String },
    #[error("`{from}` refers to undeclared {expected} `{name}`")]
    Unresolved {
        from: String,
        name: String,
        expected: DeclKind,
    },
    #[error("`{from}` refers to `{name}` as a {expected}, but it is a {found}")]
    WrongKind {
        from: String,
        name: String,
        expected: DeclKind,
        found: DeclKind,
    },
    #[error("space `{space}` reads ring `{ring}` over Z/{declared}, but the ring is over Z/{actual}")]
    PrimeMismatch {
        space: String,
        ring: String,
        declared: u32,
        actual: u32,
    },
    #[error("ring `{ring}`: {error}")]
    InvalidRing {
        ring: String,
        error: PresentationError,
    },
    #[error("bundle `{bundle}`: {error}")]
    InvalidBundle { bundle: String, error: ConeError },
    #[error("bundle `{bundle}`: base `{base}` declares no dimension")]
    MissingBaseDim { bundle: String, base: String },
}

/// Every problem found while linking, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkFailure(pub Vec<LinkError>);

impl fmt::Display for LinkFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for LinkFailure {}

/// Builds the presentation declared by `decl`.
pub fn build_ring(decl: &RingDecl) -> Result<RingPresentation, PresentationError> {
    let mut b = RingPresentation::builder(decl.prime);
    for g in &decl.generators {
        b = b.generator(&g.name, g.degree, g.truncation.value());
    }
    for r in &decl.relations {
        b = match &r.target {
            RelTarget::Zero => b.zero_relation(&r.generator, r.exponent),
            RelTarget::Monomial { coeff, factors } => {
                let f: Vec<(&str, u32)> = factors.iter().map(|(n, e)| (n.as_str(), *e)).collect();
                b.substitution(&r.generator, r.exponent, *coeff, &f)
            }
        };
    }
    for (g, w) in &decl.weights {
        b = b.weight(g, *w);
    }
    if let Some(t) = decl.top_degree {
        b = b.top_degree(t);
    }
    b.build()
}

struct Resolver<'a> {
    kinds: BTreeMap<&'a str, DeclKind>,
    errors: Vec<LinkError>,
}

impl Resolver<'_> {
    fn require(&mut self, from: &str, name: &str, expected: DeclKind) -> bool {
        match self.kinds.get(name) {
            None => {
                self.errors.push(LinkError::Unresolved {
                    from: from.to_string(),
                    name: name.to_string(),
                    expected,
                });
                false
            }
            Some(&found) if found != expected => {
                self.errors.push(LinkError::WrongKind {
                    from: from.to_string(),
                    name: name.to_string(),
                    expected,
                    found,
                });
                false
            }
            Some(_) => true,
        }
    }
}

/// Resolves all references across `documents`. The result does not depend
/// on the order of documents or of declarations within them.
pub fn link(documents: &[SourceDocument]) -> Result<Catalog, LinkFailure> {
    let mut errors = Vec::new();
    for doc in documents {
        if !doc.diagnostics.is_empty() {
            errors.push(LinkError::DocumentHasErrors {
                path: doc.path.clone(),
                count: doc.diagnostics.len(),
            });
        }
    }

    let mut by_name: BTreeMap<&str, &Declaration> = BTreeMap::new();
    for decl in documents.iter().flat_map(|d| &d.declarations) {
        if by_name.insert(decl.name(), decl).is_some() {
            errors.push(LinkError::DuplicateName {
                name: decl.name().to_string(),
            });
        }
    }
    errors.dedup();

    let mut r = Resolver {
        kinds: by_name.iter().map(|(n, d)| (*n, d.kind())).collect(),
        errors,
    };
    let mut cat = Catalog::default();

    for decl in by_name.values() {
        match decl {
            Declaration::Ring(rd) => match build_ring(rd) {
                Ok(presentation) => {
                    cat.rings.insert(
                        rd.name.clone(),
                        RingEntry {
                            name: rd.name.clone(),
                            presentation,
                            complete: rd.complete.clone(),
                        },
                    );
                }
                Err(error) => r.errors.push(LinkError::InvalidRing {
                    ring: rd.name.clone(),
                    error,
                }),
            },
            Declaration::Space(sd) => {
                let mut ring = None;
                if let Some(c) = &sd.cohomology {
                    if r.require(&sd.name, &c.ring, DeclKind::Ring) {
                        ring = Some(c.ring.clone());
                    }
                }
                let facts = sd
                    .known
                    .iter()
                    .map(|k| SpaceFact {
                        fact: k.clone(),
                        declared_in: sd.name.clone(),
                    })
                    .collect();
                cat.spaces.insert(
                    sd.name.clone(),
                    Space {
                        name: sd.name.clone(),
                        dim: sd.dim,
                        connectivity: sd.connectivity,
                        ring,
                        loopspace_even: sd.loopspace_even,
                        facts,
                    },
                );
            }
            Declaration::Bundle(bd) => {
                let mut ok = true;
                for n in [&bd.total, &bd.fiber, &bd.base] {
                    ok &= r.require(&bd.name, n, DeclKind::Space);
                }
                if bd.structure_group != TRIVIAL_GROUP {
                    ok &= r.require(&bd.name, &bd.structure_group, DeclKind::Space);
                }
                if !ok {
                    continue;
                }
                let base_dim = match by_name.get(bd.base.as_str()) {
                    Some(Declaration::Space(b)) => b.dim,
                    _ => None,
                };
                let Some(base_dim) = base_dim else {
                    r.errors.push(LinkError::MissingBaseDim {
                        bundle: bd.name.clone(),
                        base: bd.base.clone(),
                    });
                    continue;
                };
                let stages = bd
                    .stages
                    .iter()
                    .map(|s| ConeStage {
                        index: s.index,
                        attach_space: s.attach.clone(),
                        attach_dim: s.dim,
                        skeletal: s.skeletal,
                    })
                    .collect();
                let record = ConeDecomposition::new(stages).and_then(|fiber_decomposition| {
                    let rec = BundleRecord {
                        name: bd.name.clone(),
                        total: bd.total.clone(),
                        fiber: bd.fiber.clone(),
                        base: bd.base.clone(),
                        structure_group: bd.structure_group.clone(),
                        d: bd.d,
                        s: bd.s,
                        base_dim,
                        fiber_decomposition,
                        compatibility: match &bd.compatibility {
                            CertificateDecl::Skeletal => CompatibilityCertificate::Skeletal,
                            CertificateDecl::Trivial => CompatibilityCertificate::TrivialBundle,
                            CertificateDecl::Verified(reason) => CompatibilityCertificate::Verified {
                                reason: reason.clone(),
                            },
                            CertificateDecl::None => CompatibilityCertificate::None,
                        },
                        citation: bd.citation.clone(),
                    };
                    rec.validate().map(|()| rec)
                });
                match record {
                    Ok(rec) => {
                        cat.bundles.insert(bd.name.clone(), rec);
                    }
                    Err(error) => r.errors.push(LinkError::InvalidBundle {
                        bundle: bd.name.clone(),
                        error,
                    }),
                }
            }
            Declaration::Product(pd) => {
                let mut ok = r.require(&pd.name, &pd.total, DeclKind::Space);
                for f in &pd.factors {
                    ok &= r.require(&pd.name, f, DeclKind::Space);
                }
                if ok {
                    cat.products.insert(
                        pd.name.clone(),
                        ProductRecord {
                            name: pd.name.clone(),
                            total: pd.total.clone(),
                            factors: pd.factors.clone(),
                            citation: pd.citation.clone(),
                        },
                    );
                }
            }
            Declaration::Fact(fd) => {
                if r.require(&fd.name, &fd.space, DeclKind::Space) {
                    cat.facts.insert(fd.name.clone(), fd.clone());
                }
            }
        }
    }

    // Prime checks need the ring declarations, which may come from any
    // document.
    for decl in by_name.values() {
        if let Declaration::Space(sd) = decl {
            if let Some(c) = &sd.cohomology {
                if let (Some(declared), Some(Declaration::Ring(rd))) =
                    (c.prime, by_name.get(c.ring.as_str()))
                {
                    if declared != rd.prime {
                        r.errors.push(LinkError::PrimeMismatch {
                            space: sd.name.clone(),
                            ring: rd.name.clone(),
                            declared,
                            actual: rd.prime,
                        });
                    }
                }
            }
        }
    }

    for fd in cat.facts.values() {
        if let Some(space) = cat.spaces.get_mut(&fd.space) {
            space.facts.extend(fd.known.iter().map(|k| SpaceFact {
                fact: k.clone(),
                declared_in: fd.name.clone(),
            }));
        }
    }
    for space in cat.spaces.values_mut() {
        space.facts.sort();
    }

    let mut errors = r.errors;
    if errors.is_empty() {
        Ok(cat)
    } else {
        errors.sort();
        errors.dedup();
        Err(LinkFailure(errors))
    }
}
