//! The shipped corpus of `.lsc` files, embedded at compile time.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::catalog::{link, Catalog, LinkFailure};
use crate::cone::{check_compatibility, CompatibilityCertificate, Verdict};
use crate::dsl::{parse_named, SourceDocument};

macro_rules! corpus_files {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` for every shipped file.
        pub const CORPUS_FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../../corpus/", $name)))),*
        ];
    };
}

corpus_files!(
    "bases.lsc",
    "g2.lsc",
    "po8.lsc",
    "pu.lsc",
    "rp7.lsc",
    "so3.lsc",
    "so5.lsc",
    "so6.lsc",
    "so7.lsc",
    "so8.lsc",
    "so9.lsc",
    "sp.lsc",
    "sp1.lsc",
    "spin.lsc",
    "su.lsc",
);

#[derive(Debug)]
pub enum CorpusError {
    Io { path: String, error: std::io::Error },
    Parse(Vec<SourceDocument>),
    Link(LinkFailure),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Io { path, error } => write!(f, "{path}: {error}"),
            CorpusError::Parse(docs) => {
                let mut first = true;
                for doc in docs {
                    for d in &doc.diagnostics {
                        if !first {
                            writeln!(f)?;
                        }
                        first = false;
                        write!(f, "{}:{d}", doc.path)?;
                    }
                }
                Ok(())
            }
            CorpusError::Link(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CorpusError {}

/// Parses every embedded file.
pub fn corpus_documents() -> Vec<SourceDocument> {
    CORPUS_FILES
        .iter()
        .map(|(name, text)| parse_named(name, text))
        .collect()
}

/// Links parsed documents, reporting parse diagnostics first if any.
pub fn link_documents(docs: Vec<SourceDocument>) -> Result<Catalog, CorpusError> {
    let bad: Vec<SourceDocument> = docs.iter().filter(|d| !d.is_ok()).cloned().collect();
    if !bad.is_empty() {
        return Err(CorpusError::Parse(bad));
    }
    link(&docs).map_err(CorpusError::Link)
}

/// Parses and links the shipped corpus.
pub fn load_corpus() -> Result<Catalog, CorpusError> {
    link_documents(corpus_documents())
}

/// Reads `path` as one document.
pub fn read_document(path: &Path) -> Result<SourceDocument, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|error| CorpusError::Io {
        path: path.display().to_string(),
        error,
    })?;
    Ok(parse_named(&path.display().to_string(), &text))
}

/// Every `*.lsc` file directly inside `dir`, in file-name order.
pub fn read_dir_documents(dir: &Path) -> Result<Vec<SourceDocument>, CorpusError> {
    let io = |error| CorpusError::Io {
        path: dir.display().to_string(),
        error,
    };
    let mut paths = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let p = entry.map_err(io)?.path();
        if p.extension().is_some_and(|e| e == "lsc") {
            paths.push(p);
        }
    }
    paths.sort();
    paths.iter().map(|p| read_document(p)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LintIssue {
    pub subject: String,
    pub message: String,
}

/// Checks that claims carry sources and that certificates agree with their
/// bundle data.
pub fn lint(catalog: &Catalog) -> Vec<LintIssue> {
    let mut out = Vec::new();
    let mut issue = |subject: &str, message: String| {
        out.push(LintIssue {
            subject: subject.to_string(),
            message,
        })
    };
    for ring in catalog.rings.values() {
        if ring.complete.as_deref().is_some_and(|c| c.trim().is_empty()) {
            issue(&ring.name, "`complete` needs a nonempty source".into());
        }
    }
    for space in catalog.spaces.values() {
        for f in &space.facts {
            if f.fact.citation.trim().is_empty() {
                issue(
                    &f.declared_in,
                    format!("fact on {} about {} has no citation", space.name, f.fact.invariant.keyword()),
                );
            }
        }
    }
    for b in catalog.bundles.values() {
        if let CompatibilityCertificate::Verified { reason } = &b.compatibility {
            if reason.trim().is_empty() {
                issue(&b.name, "verified certificate has an empty justification".into());
            }
        }
        if let Verdict::Fail { reason } = check_compatibility(b) {
            if reason.inconsistent {
                issue(&b.name, reason.message);
            }
        }
        if b.citation.as_deref().map_or(true, |c| c.trim().is_empty()) {
            issue(&b.name, "bundle has no citation".into());
        }
    }
    for p in catalog.products.values() {
        if p.citation.as_deref().map_or(true, |c| c.trim().is_empty()) {
            issue(&p.name, "product has no citation".into());
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses() {
        for doc in corpus_documents() {
            assert!(doc.is_ok(), "{}: {:?}", doc.path, doc.diagnostics);
        }
    }

    #[test]
    fn corpus_links() {
        let cat = load_corpus().unwrap_or_else(|e| panic!("{e}"));
        assert!(cat.rings.contains_key("SO5_mod2"));
        assert!(cat.ring_of("Spin(9)").is_none());
        assert!(cat.ring_of("PO(8)").is_none());
    }

    #[test]
    fn shipped_corpus_is_clean() {
        assert_eq!(lint(&load_corpus().unwrap()), Vec::new());
    }

    #[test]
    fn lint_flags_missing_sources() {
        let doc = parse_named(
            "x.lsc",
            "ring R over Z/2 { gen x : deg 1 trunc 2; complete from \" \"; }\n\
             space F { dim 3; known cat = 1 from \"\"; }\n\
             space B { dim 7; }\n\
             bundle E { total F; fiber F; base B; structure-group trivial; cells-mod d 1 s 0;\n\
             compatibility skeletal; }",
        );
        let issues = lint(&link(&[doc]).unwrap());
        let subjects: Vec<&str> = issues.iter().map(|i| i.subject.as_str()).collect();
        assert_eq!(subjects, vec!["E", "E", "F", "R"]);
    }

    #[test]
    fn so5_files_alone() {
        let pick = |n: &str| {
            let (name, text) = CORPUS_FILES.iter().find(|(f, _)| *f == n).unwrap();
            parse_named(name, text)
        };
        let cat = link(&[pick("so5.lsc"), pick("sp1.lsc"), pick("rp7.lsc")]).unwrap();
        assert_eq!(
            (cat.rings.len(), cat.spaces.len(), cat.bundles.len()),
            (1, 3, 1)
        );
    }

    #[test]
    fn on_disk_matches_embedded() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
        let docs = read_dir_documents(&dir).unwrap();
        assert_eq!(docs.len(), CORPUS_FILES.len());
    }
}
