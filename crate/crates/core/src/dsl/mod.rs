//! The `.lsc` declaration language.
//!
//! A document is a sequence of blocks, each introduced by a keyword and a
//! name:
//!
//! ```text
//! # comment
//! ring SO5_mod2 over Z/2 {
//!     gen x1 : deg 1 trunc 8;
//!     gen x3 : deg 3 exterior;
//!     top 10;
//!     complete from "mod 2 cohomology of SO(5)";
//! }
//!
//! space SO(5) {
//!     dim 10;
//!     connectivity 0;
//!     cohomology SO5_mod2 over Z/2;
//!     loopspace-even;
//!     known cat = 8 from "James-Singhof";
//! }
//! ```
//!
//! The full grammar lives in `docs/grammar.md`. Parsing never panics: every
//! input yields a [`SourceDocument`], and malformed blocks are dropped with a
//! diagnostic instead of being emitted half-built.

mod lexer;
mod parser;

use std::fmt::{self, Write as _};

use serde::Serialize;

pub use parser::{parse, parse_named};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDocument {
    pub path: String,
    pub declarations: Vec<Declaration>,
    pub diagnostics: Vec<Diagnostic>,
}

impl SourceDocument {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn find(&self, name: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeclKind {
    Ring,
    Space,
    Bundle,
    Product,
    Fact,
}

impl fmt::Display for DeclKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeclKind::Ring => "ring",
            DeclKind::Space => "space",
            DeclKind::Bundle => "bundle",
            DeclKind::Product => "product",
            DeclKind::Fact => "fact",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Declaration {
    Ring(RingDecl),
    Space(SpaceDecl),
    Bundle(BundleDecl),
    Product(ProductDecl),
    Fact(FactDecl),
}

impl Declaration {
    pub fn name(&self) -> &str {
        match self {
            Declaration::Ring(d) => &d.name,
            Declaration::Space(d) => &d.name,
            Declaration::Bundle(d) => &d.name,
            Declaration::Product(d) => &d.name,
            Declaration::Fact(d) => &d.name,
        }
    }

    pub fn kind(&self) -> DeclKind {
        match self {
            Declaration::Ring(_) => DeclKind::Ring,
            Declaration::Space(_) => DeclKind::Space,
            Declaration::Bundle(_) => DeclKind::Bundle,
            Declaration::Product(_) => DeclKind::Product,
            Declaration::Fact(_) => DeclKind::Fact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    None,
    Trunc(u32),
    /// Sugar for `trunc 2`.
    Exterior,
}

impl Truncation {
    pub fn value(self) -> Option<u32> {
        match self {
            Truncation::None => None,
            Truncation::Trunc(t) => Some(t),
            Truncation::Exterior => Some(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub degree: u32,
    pub truncation: Truncation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelTarget {
    Zero,
    Monomial { coeff: u32, factors: Vec<(String, u32)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub generator: String,
    pub exponent: u32,
    pub target: RelTarget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub prime: u32,
    pub generators: Vec<GenDecl>,
    pub relations: Vec<RelDecl>,
    pub weights: Vec<(String, u32)>,
    pub top_degree: Option<u32>,
    /// Source asserting the ring is the full cohomology and attains the
    /// cup-length over all theories.
    pub complete: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Qualifier {
    Lower,
    Upper,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum FactInvariant {
    #[serde(rename = "cup")]
    Cup,
    #[serde(rename = "sigmacat")]
    SigmaCat,
    #[serde(rename = "cat")]
    Cat,
    #[serde(rename = "Cat")]
    StrongCat,
    #[serde(rename = "wcat")]
    WCat,
}

impl FactInvariant {
    pub fn keyword(self) -> &'static str {
        match self {
            FactInvariant::Cup => "cup",
            FactInvariant::SigmaCat => "sigmacat",
            FactInvariant::Cat => "cat",
            FactInvariant::StrongCat => "Cat",
            FactInvariant::WCat => "wcat",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "cup" => FactInvariant::Cup,
            "sigmacat" => FactInvariant::SigmaCat,
            "cat" => FactInvariant::Cat,
            "Cat" => FactInvariant::StrongCat,
            "wcat" => FactInvariant::WCat,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KnownFact {
    pub invariant: FactInvariant,
    pub qualifier: Qualifier,
    pub value: u32,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyRef {
    pub ring: String,
    pub prime: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceDecl {
    pub name: String,
    pub dim: Option<u32>,
    /// The space is `c`-connected.
    pub connectivity: Option<u32>,
    pub cohomology: Option<CohomologyRef>,
    pub loopspace_even: bool,
    pub known: Vec<KnownFact>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageDecl {
    pub index: u32,
    pub attach: String,
    pub dim: u32,
    pub skeletal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateDecl {
    Skeletal,
    Trivial,
    Verified(String),
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleDecl {
    pub name: String,
    pub total: String,
    pub fiber: String,
    pub base: String,
    pub structure_group: String,
    pub d: u32,
    pub s: u32,
    pub stages: Vec<StageDecl>,
    pub compatibility: CertificateDecl,
    pub citation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductDecl {
    pub name: String,
    pub total: String,
    pub factors: Vec<String>,
    pub citation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactDecl {
    pub name: String,
    pub space: String,
    pub known: Vec<KnownFact>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn render_known(out: &mut String, k: &KnownFact) {
    let qual = match k.qualifier {
        Qualifier::Exact => "",
        Qualifier::Lower => "lower ",
        Qualifier::Upper => "upper ",
    };
    let _ = writeln!(
        out,
        "    known {qual}{} = {} from {};",
        k.invariant.keyword(),
        k.value,
        quote(&k.citation)
    );
}

/// Canonical text for a declaration list; reparsing yields the same list.
pub fn render(declarations: &[Declaration]) -> String {
    let mut out = String::new();
    for (i, decl) in declarations.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        render_declaration(&mut out, decl);
    }
    out
}

fn render_declaration(out: &mut String, decl: &Declaration) {
    match decl {
        Declaration::Ring(r) => {
            let _ = writeln!(out, "ring {} over Z/{} {{", r.name, r.prime);
            for g in &r.generators {
                let trunc = match g.truncation {
                    Truncation::None => String::new(),
                    Truncation::Trunc(t) => format!(" trunc {t}"),
                    Truncation::Exterior => " exterior".to_string(),
                };
                let _ = writeln!(out, "    gen {} : deg {}{};", g.name, g.degree, trunc);
            }
            for rel in &r.relations {
                let rhs = match &rel.target {
                    RelTarget::Zero => "0".to_string(),
                    RelTarget::Monomial { coeff, factors } => {
                        let body = factors
                            .iter()
                            .map(|(n, e)| {
                                if *e == 1 {
                                    n.clone()
                                } else {
                                    format!("{n}^{e}")
                                }
                            })
                            .collect::<Vec<_>>()
                            .join(" * ");
                        if *coeff == 1 {
                            body
                        } else {
                            format!("{coeff} * {body}")
                        }
                    }
                };
                let _ = writeln!(out, "    rel {}^{} = {};", rel.generator, rel.exponent, rhs);
            }
            for (g, w) in &r.weights {
                let _ = writeln!(out, "    weight {g} = {w};");
            }
            if let Some(t) = r.top_degree {
                let _ = writeln!(out, "    top {t};");
            }
            if let Some(c) = &r.complete {
                let _ = writeln!(out, "    complete from {};", quote(c));
            }
            out.push_str("}\n");
        }
        Declaration::Space(s) => {
            let _ = writeln!(out, "space {} {{", s.name);
            if let Some(d) = s.dim {
                let _ = writeln!(out, "    dim {d};");
            }
            if let Some(c) = s.connectivity {
                let _ = writeln!(out, "    connectivity {c};");
            }
            if let Some(c) = &s.cohomology {
                match c.prime {
                    Some(p) => {
                        let _ = writeln!(out, "    cohomology {} over Z/{};", c.ring, p);
                    }
                    None => {
                        let _ = writeln!(out, "    cohomology {};", c.ring);
                    }
                }
            }
            if s.loopspace_even {
                out.push_str("    loopspace-even;\n");
            }
            for k in &s.known {
                render_known(out, k);
            }
            out.push_str("}\n");
        }
        Declaration::Bundle(b) => {
            let _ = writeln!(out, "bundle {} {{", b.name);
            let _ = writeln!(out, "    total {};", b.total);
            let _ = writeln!(out, "    fiber {};", b.fiber);
            let _ = writeln!(out, "    base {};", b.base);
            let _ = writeln!(out, "    structure-group {};", b.structure_group);
            let _ = writeln!(out, "    cells-mod d {} s {};", b.d, b.s);
            for st in &b.stages {
                let _ = writeln!(
                    out,
                    "    stage {} : {} dim {}{};",
                    st.index,
                    quote(&st.attach),
                    st.dim,
                    if st.skeletal { " skeletal" } else { "" }
                );
            }
            let cert = match &b.compatibility {
                CertificateDecl::Skeletal => "skeletal".to_string(),
                CertificateDecl::Trivial => "trivial".to_string(),
                CertificateDecl::None => "none".to_string(),
                CertificateDecl::Verified(r) => format!("verified {}", quote(r)),
            };
            let _ = writeln!(out, "    compatibility {cert};");
            if let Some(c) = &b.citation {
                let _ = writeln!(out, "    cite {};", quote(c));
            }
            out.push_str("}\n");
        }
        Declaration::Product(p) => {
            let _ = writeln!(out, "product {} {{", p.name);
            let _ = writeln!(out, "    total {};", p.total);
            for f in &p.factors {
                let _ = writeln!(out, "    factor {f};");
            }
            if let Some(c) = &p.citation {
                let _ = writeln!(out, "    cite {};", quote(c));
            }
            out.push_str("}\n");
        }
        Declaration::Fact(f) => {
            let _ = writeln!(out, "fact {} {{", f.name);
            let _ = writeln!(out, "    space {};", f.space);
            for k in &f.known {
                render_known(out, k);
            }
            out.push_str("}\n");
        }
    }
}
