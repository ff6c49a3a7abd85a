use std::collections::BTreeSet;

use super::lexer::{lex, Tok, Token};
use super::*;
use crate::algebra::is_prime;

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + offset).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map_or(self.end, |t| (t.line, t.column))
    }

    fn error_at(&self, at: (usize, usize), message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            line: at.0,
            column: at.1,
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let found = match self.peek() {
            Some(t) => t.describe(),
            None => "end of input".to_string(),
        };
        self.error_at(self.here(), format!("expected {expected}, found {found}"))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn semi(&mut self) -> PResult<()> {
        self.expect(Tok::Semi)
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn int(&mut self, what: &str) -> PResult<u32> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn modulus(&mut self) -> PResult<u32> {
        let at = self.here();
        let m = self.ident("a coefficient ring `Z/<p>`")?;
        let p = m
            .strip_prefix("Z/")
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| self.error_at(at, format!("expected `Z/<p>`, found `{m}`")))?;
        if p < 2 {
            return Err(self.error_at(at, format!("prime must be >= 2, found Z/{p}")));
        }
        if !is_prime(p) {
            return Err(self.error_at(at, format!("modulus {p} is not a prime")));
        }
        Ok(p)
    }

    /// Runs `stmt` for each statement until the closing brace.
    fn block(&mut self, mut stmt: impl FnMut(&mut Self, String, (usize, usize)) -> PResult<()>) -> PResult<()> {
        self.expect(Tok::LBrace)?;
        loop {
            if self.peek() == Some(&Tok::RBrace) {
                self.pos += 1;
                return Ok(());
            }
            let at = self.here();
            let head = self.ident("a statement keyword or `}`")?;
            stmt(self, head, at)?;
        }
    }

    fn known(&mut self) -> PResult<KnownFact> {
        let qualifier = match self.peek() {
            Some(Tok::Ident(s)) if s == "lower" => Qualifier::Lower,
            Some(Tok::Ident(s)) if s == "upper" => Qualifier::Upper,
            Some(Tok::Ident(s)) if s == "exact" => Qualifier::Exact,
            _ => Qualifier::Exact,
        };
        if matches!(self.peek(), Some(Tok::Ident(s)) if matches!(s.as_str(), "lower" | "upper" | "exact"))
        {
            self.pos += 1;
        }
        let at = self.here();
        let inv = self.ident("an invariant (cup, sigmacat, cat, Cat, wcat)")?;
        let invariant = FactInvariant::from_keyword(&inv)
            .ok_or_else(|| self.error_at(at, format!("unknown invariant `{inv}`")))?;
        self.expect(Tok::Eq)?;
        let value = self.int("an integer value")?;
        self.keyword("from")?;
        let citation = self.string("a citation string")?;
        self.semi()?;
        Ok(KnownFact {
            invariant,
            qualifier,
            value,
            citation,
        })
    }

    fn rel_target(&mut self) -> PResult<RelTarget> {
        if self.peek() == Some(&Tok::Int(0)) && self.peek_at(1) == Some(&Tok::Semi) {
            self.pos += 1;
            return Ok(RelTarget::Zero);
        }
        let mut coeff = 1;
        if let Some(Tok::Int(c)) = self.peek() {
            coeff = *c;
            self.pos += 1;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            }
        }
        let mut factors = Vec::new();
        loop {
            let name = self.ident("a generator")?;
            let mut e = 1;
            if self.peek() == Some(&Tok::Caret) {
                self.pos += 1;
                e = self.int("an exponent")?;
            }
            factors.push((name, e));
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Ident(_)) => {}
                _ => break,
            }
        }
        Ok(RelTarget::Monomial { coeff, factors })
    }

    fn ring(&mut self) -> PResult<RingDecl> {
        let name_at = self.here();
        let name = self.ident("a ring name")?;
        self.keyword("over")?;
        let prime = self.modulus()?;
        let mut ring = RingDecl {
            name,
            prime,
            generators: Vec::new(),
            relations: Vec::new(),
            weights: Vec::new(),
            top_degree: None,
            complete: None,
        };
        self.block(|p, head, at| {
            match head.as_str() {
                "gen" => {
                    let name = p.ident("a generator name")?;
                    p.expect(Tok::Colon)?;
                    p.keyword("deg")?;
                    let degree = p.int("a degree")?;
                    let truncation = if p.peek_keyword("trunc") {
                        p.pos += 1;
                        Truncation::Trunc(p.int("a truncation height")?)
                    } else if p.peek_keyword("exterior") {
                        p.pos += 1;
                        Truncation::Exterior
                    } else {
                        Truncation::None
                    };
                    p.semi()?;
                    ring.generators.push(GenDecl {
                        name,
                        degree,
                        truncation,
                    });
                }
                "rel" => {
                    let generator = p.ident("a generator")?;
                    p.expect(Tok::Caret)?;
                    let exponent = p.int("an exponent")?;
                    p.expect(Tok::Eq)?;
                    let target = p.rel_target()?;
                    p.semi()?;
                    ring.relations.push(RelDecl {
                        generator,
                        exponent,
                        target,
                    });
                }
                "weight" => {
                    let g = p.ident("a generator")?;
                    p.expect(Tok::Eq)?;
                    let w = p.int("a weight")?;
                    p.semi()?;
                    ring.weights.push((g, w));
                }
                "top" => {
                    if ring.top_degree.is_some() {
                        return Err(p.error_at(at, "duplicate `top`"));
                    }
                    ring.top_degree = Some(p.int("a top degree")?);
                    p.semi()?;
                }
                "complete" => {
                    if ring.complete.is_some() {
                        return Err(p.error_at(at, "duplicate `complete`"));
                    }
                    p.keyword("from")?;
                    ring.complete = Some(p.string("a citation string")?);
                    p.semi()?;
                }
                other => return Err(p.error_at(at, format!("unknown keyword `{other}` in ring"))),
            }
            Ok(())
        })?;
        if ring.generators.is_empty() {
            return Err(self.error_at(name_at, format!("ring `{}` has no generators", ring.name)));
        }
        Ok(ring)
    }

    fn space(&mut self) -> PResult<SpaceDecl> {
        let name = self.ident("a space name")?;
        let mut space = SpaceDecl {
            name,
            dim: None,
            connectivity: None,
            cohomology: None,
            loopspace_even: false,
            known: Vec::new(),
        };
        self.block(|p, head, at| {
            let dup = |p: &Self| p.error_at(at, format!("duplicate `{head}`"));
            match head.as_str() {
                "dim" => {
                    if space.dim.is_some() {
                        return Err(dup(p));
                    }
                    space.dim = Some(p.int("a dimension")?);
                    p.semi()?;
                }
                "connectivity" => {
                    if space.connectivity.is_some() {
                        return Err(dup(p));
                    }
                    space.connectivity = Some(p.int("a connectivity")?);
                    p.semi()?;
                }
                "cohomology" => {
                    if space.cohomology.is_some() {
                        return Err(dup(p));
                    }
                    let ring = p.ident("a ring name")?;
                    let prime = if p.peek_keyword("over") {
                        p.pos += 1;
                        Some(p.modulus()?)
                    } else {
                        None
                    };
                    p.semi()?;
                    space.cohomology = Some(CohomologyRef { ring, prime });
                }
                "loopspace-even" => {
                    if space.loopspace_even {
                        return Err(dup(p));
                    }
                    space.loopspace_even = true;
                    p.semi()?;
                }
                "known" => space.known.push(p.known()?),
                other => return Err(p.error_at(at, format!("unknown keyword `{other}` in space"))),
            }
            Ok(())
        })?;
        Ok(space)
    }

    fn bundle(&mut self) -> PResult<BundleDecl> {
        let name_at = self.here();
        let name = self.ident("a bundle name")?;
        let mut total = None;
        let mut fiber = None;
        let mut base = None;
        let mut group = None;
        let mut cells = None;
        let mut stages = Vec::new();
        let mut compat = None;
        let mut citation = None;
        self.block(|p, head, at| {
            let dup = |p: &Self| p.error_at(at, format!("duplicate `{head}`"));
            let slot = match head.as_str() {
                "total" => Some(&mut total),
                "fiber" => Some(&mut fiber),
                "base" => Some(&mut base),
                "structure-group" => Some(&mut group),
                _ => None,
            };
            if let Some(slot) = slot {
                if slot.is_some() {
                    return Err(dup(p));
                }
                *slot = Some(p.ident("a space name")?);
                return p.semi();
            }
            match head.as_str() {
                "cells-mod" => {
                    if cells.is_some() {
                        return Err(dup(p));
                    }
                    p.keyword("d")?;
                    let d = p.int("d")?;
                    p.keyword("s")?;
                    let s = p.int("s")?;
                    p.semi()?;
                    cells = Some((d, s));
                }
                "stage" => {
                    let index = p.int("a stage index")?;
                    p.expect(Tok::Colon)?;
                    let attach = p.string("a description of the attached space")?;
                    p.keyword("dim")?;
                    let dim = p.int("the cone dimension")?;
                    let skeletal = if p.peek_keyword("skeletal") {
                        p.pos += 1;
                        true
                    } else {
                        false
                    };
                    p.semi()?;
                    stages.push(StageDecl {
                        index,
                        attach,
                        dim,
                        skeletal,
                    });
                }
                "compatibility" => {
                    if compat.is_some() {
                        return Err(dup(p));
                    }
                    let kind_at = p.here();
                    let kind = p.ident("skeletal, trivial, verified or none")?;
                    compat = Some(match kind.as_str() {
                        "skeletal" => CertificateDecl::Skeletal,
                        "trivial" => CertificateDecl::Trivial,
                        "none" => CertificateDecl::None,
                        "verified" => CertificateDecl::Verified(p.string("a justification string")?),
                        other => {
                            return Err(p.error_at(
                                kind_at,
                                format!("unknown certificate kind `{other}`"),
                            ))
                        }
                    });
                    p.semi()?;
                }
                "cite" => {
                    if citation.is_some() {
                        return Err(dup(p));
                    }
                    citation = Some(p.string("a citation string")?);
                    p.semi()?;
                }
                other => return Err(p.error_at(at, format!("unknown keyword `{other}` in bundle"))),
            }
            Ok(())
        })?;
        let missing = |what: &str| self.error_at(name_at, format!("bundle `{name}` is missing `{what}`"));
        let total = total.ok_or_else(|| missing("total"))?;
        let fiber = fiber.ok_or_else(|| missing("fiber"))?;
        let base = base.ok_or_else(|| missing("base"))?;
        let structure_group = group.ok_or_else(|| missing("structure-group"))?;
        let (d, s) = cells.ok_or_else(|| missing("cells-mod"))?;
        let compatibility = compat.ok_or_else(|| missing("compatibility"))?;
        if d < 1 {
            return Err(self.error_at(name_at, format!("bundle `{name}`: d must be >= 1")));
        }
        if s > d - 1 {
            return Err(self.error_at(
                name_at,
                format!("bundle `{name}`: s = {s} must satisfy 0 <= s <= d - 1 = {}", d - 1),
            ));
        }
        Ok(BundleDecl {
            name,
            total,
            fiber,
            base,
            structure_group,
            d,
            s,
            stages,
            compatibility,
            citation,
        })
    }

    fn product(&mut self) -> PResult<ProductDecl> {
        let name_at = self.here();
        let name = self.ident("a product name")?;
        let mut total = None;
        let mut factors = Vec::new();
        let mut citation = None;
        self.block(|p, head, at| {
            match head.as_str() {
                "total" => {
                    if total.is_some() {
                        return Err(p.error_at(at, "duplicate `total`"));
                    }
                    total = Some(p.ident("a space name")?);
                }
                "factor" => factors.push(p.ident("a space name")?),
                "cite" => {
                    if citation.is_some() {
                        return Err(p.error_at(at, "duplicate `cite`"));
                    }
                    citation = Some(p.string("a citation string")?);
                }
                other => return Err(p.error_at(at, format!("unknown keyword `{other}` in product"))),
            }
            p.semi()
        })?;
        let total =
            total.ok_or_else(|| self.error_at(name_at, format!("product `{name}` is missing `total`")))?;
        if factors.is_empty() {
            return Err(self.error_at(name_at, format!("product `{name}` has no factors")));
        }
        Ok(ProductDecl {
            name,
            total,
            factors,
            citation,
        })
    }

    fn fact(&mut self) -> PResult<FactDecl> {
        let name_at = self.here();
        let name = self.ident("a fact name")?;
        let mut space = None;
        let mut known = Vec::new();
        self.block(|p, head, at| {
            match head.as_str() {
                "space" => {
                    if space.is_some() {
                        return Err(p.error_at(at, "duplicate `space`"));
                    }
                    space = Some(p.ident("a space name")?);
                    p.semi()?;
                }
                "known" => known.push(p.known()?),
                other => return Err(p.error_at(at, format!("unknown keyword `{other}` in fact"))),
            }
            Ok(())
        })?;
        let space =
            space.ok_or_else(|| self.error_at(name_at, format!("fact `{name}` is missing `space`")))?;
        if known.is_empty() {
            return Err(self.error_at(name_at, format!("fact `{name}` states nothing")));
        }
        Ok(FactDecl { name, space, known })
    }

    fn item(&mut self) -> PResult<Declaration> {
        let at = self.here();
        let head = self.ident("a declaration (ring, space, bundle, product, fact)")?;
        Ok(match head.as_str() {
            "ring" => Declaration::Ring(self.ring()?),
            "space" => Declaration::Space(self.space()?),
            "bundle" => Declaration::Bundle(self.bundle()?),
            "product" => Declaration::Product(self.product()?),
            "fact" => Declaration::Fact(self.fact()?),
            other => return Err(self.error_at(at, format!("unknown keyword `{other}`"))),
        })
    }

    /// Skips the rest of a failed item: through its block if one was opened,
    /// otherwise through the next `;`.
    fn recover(&mut self, start: usize) {
        let mut depth = 0usize;
        let mut i = start;
        while i < self.toks.len() {
            match self.toks[i].tok {
                Tok::LBrace => depth += 1,
                Tok::RBrace => {
                    if depth <= 1 {
                        self.pos = i + 1;
                        return;
                    }
                    depth -= 1;
                }
                Tok::Semi if depth == 0 => {
                    self.pos = i + 1;
                    return;
                }
                _ => {}
            }
            i += 1;
        }
        self.pos = self.toks.len();
    }
}

/// Parses a document. Never fails: problems are reported as diagnostics and
/// the offending block is left out.
pub fn parse(text: &str) -> SourceDocument {
    parse_named("<input>", text)
}

pub fn parse_named(path: &str, text: &str) -> SourceDocument {
    let (toks, lex_error) = lex(text);
    let end = toks.last().map_or((1, 1), |t| (t.line, t.column + 1));
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end,
    };
    let mut declarations = Vec::new();
    let mut diagnostics = Vec::new();
    let mut names = BTreeSet::new();
    while p.pos < toks.len() {
        let start = p.pos;
        let name_at = toks
            .get(start + 1)
            .map_or(end, |t| (t.line, t.column));
        match p.item() {
            Ok(decl) => {
                if names.insert(decl.name().to_string()) {
                    declarations.push(decl);
                } else {
                    diagnostics.push(p.error_at(
                        name_at,
                        format!("duplicate name `{}`", decl.name()),
                    ));
                }
            }
            Err(d) => {
                diagnostics.push(d);
                p.recover(start);
            }
        }
    }
    if let Some(d) = lex_error {
        diagnostics.push(d);
    }
    SourceDocument {
        path: path.to_string(),
        declarations,
        diagnostics,
    }
}
