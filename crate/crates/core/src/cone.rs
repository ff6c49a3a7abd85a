//! Cone decompositions, fibre bundles and the strong-category upper bounds
//! they produce.
//!
//! Only the combinatorial shadow of a cone decomposition is modelled: the
//! number of stages and the dimension of each attached cone. Compatibility
//! of a decomposition with the structure-group action is never computed;
//! it is supplied as a [`CompatibilityCertificate`] and checked for
//! internal consistency.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

/// Name used as the structure group of a trivial bundle.
pub const TRIVIAL_GROUP: &str = "trivial";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Error)]
pub enum ConeError {
    #[error("stage {found} is out of sequence (expected stage {expected})")]
    StageOrder { expected: u32, found: u32 },
    #[error("stage {0} attaches a cone of dimension 0")]
    ZeroDimStage(u32),
    #[error("bundle `{bundle}`: d must be >= 1")]
    ZeroD { bundle: String },
    #[error("bundle `{bundle}`: s = {s} must lie in 0..={max}")]
    SOutOfRange { bundle: String, s: u32, max: u32 },
    #[error("bundle `{bundle}`: base dimension {dim} is positive but below d = {d}")]
    BaseTooSmall { bundle: String, dim: u32, d: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeStage {
    pub index: u32,
    /// Free-text description of the space `K_i` whose cone is attached.
    pub attach_space: String,
    /// Dimension of the attached cone `C(K_i)`.
    pub attach_dim: u32,
    /// The stage is a skeleton of the fibre.
    pub skeletal: bool,
}

/// A filtration `* = F_0 ⊂ F_1 ⊂ ... ⊂ F_m` in which each `F_i` is the
/// mapping cone of some `K_i -> F_{i-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ConeDecomposition {
    stages: Vec<ConeStage>,
}

impl ConeDecomposition {
    pub fn new(stages: Vec<ConeStage>) -> Result<Self, ConeError> {
        for (pos, st) in stages.iter().enumerate() {
            let expected = pos as u32 + 1;
            if st.index != expected {
                return Err(ConeError::StageOrder {
                    expected,
                    found: st.index,
                });
            }
            if st.attach_dim == 0 {
                return Err(ConeError::ZeroDimStage(st.index));
            }
        }
        Ok(ConeDecomposition { stages })
    }

    pub fn length(&self) -> u32 {
        self.stages.len() as u32
    }

    pub fn stages(&self) -> &[ConeStage] {
        &self.stages
    }

    /// Every stage is a skeleton and the skeleton dimensions increase
    /// strictly.
    pub fn is_skeletal(&self) -> bool {
        self.stages.iter().all(|s| s.skeletal)
            && self
                .stages
                .windows(2)
                .all(|w| w[0].attach_dim < w[1].attach_dim)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompatibilityCertificate {
    /// The fibre is the structure group and the stages are its skeleta.
    Skeletal,
    /// The bundle is trivial; any decomposition is compatible.
    TrivialBundle,
    /// A human-auditable argument that the action compresses stage-wise.
    Verified { reason: String },
    None,
}

/// A fibre bundle `F -> X -> B` with structure group `G`, where `B` is
/// `(d-1)`-connected with cells in dimensions `0..=s` mod `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleRecord {
    pub name: String,
    pub total: String,
    pub fiber: String,
    pub base: String,
    pub structure_group: String,
    pub d: u32,
    pub s: u32,
    pub base_dim: u32,
    pub fiber_decomposition: ConeDecomposition,
    pub compatibility: CompatibilityCertificate,
    pub citation: Option<String>,
}

impl BundleRecord {
    /// Checks the numeric invariants on `d`, `s` and the base dimension.
    pub fn validate(&self) -> Result<(), ConeError> {
        if self.d == 0 {
            return Err(ConeError::ZeroD {
                bundle: self.name.clone(),
            });
        }
        if self.s > self.d - 1 {
            return Err(ConeError::SOutOfRange {
                bundle: self.name.clone(),
                s: self.s,
                max: self.d - 1,
            });
        }
        if self.base_dim != 0 && self.base_dim < self.d {
            return Err(ConeError::BaseTooSmall {
                bundle: self.name.clone(),
                dim: self.base_dim,
                d: self.d,
            });
        }
        Ok(())
    }

    /// `n = floor(dim B / d)`, the number of cone stages of the base.
    pub fn base_stages(&self) -> u32 {
        james_ganea_bound(self.base_dim, self.d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule", content = "reason", rename_all = "snake_case")]
pub enum CompatibilityRule {
    Skeletal,
    TrivialBundle,
    Verified(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailReason {
    /// The certificate contradicts the bundle data, as opposed to being
    /// absent.
    pub inconsistent: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass { rule: CompatibilityRule },
    Fail { reason: FailReason },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bundle `{bundle}`: no cone-decomposition bound ({})", reason.message)]
pub struct Refusal {
    pub bundle: String,
    pub reason: FailReason,
}

/// `floor(dim / d)`: Cat of a `(d-1)`-connected complex of dimension `dim`
/// is at most this.
pub fn james_ganea_bound(dim: u32, d: u32) -> u32 {
    assert!(d >= 1, "connectivity parameter d must be >= 1");
    dim / d
}

fn inconsistent(message: String) -> Verdict {
    Verdict::Fail {
        reason: FailReason {
            inconsistent: true,
            message,
        },
    }
}

/// Checks the bundle's compatibility certificate against the two syntactic
/// sufficient conditions (skeleta of a principal bundle with `d = 1, s = 0`;
/// any decomposition of a trivial bundle with `s = d - 1`), or accepts a
/// recorded justification.
pub fn check_compatibility(b: &BundleRecord) -> Verdict {
    match &b.compatibility {
        CompatibilityCertificate::Skeletal => {
            if b.fiber != b.structure_group {
                inconsistent(format!(
                    "skeletal certificate needs fibre = structure group, got `{}` and `{}`",
                    b.fiber, b.structure_group
                ))
            } else if b.s != 0 {
                inconsistent(format!("skeletal certificate needs s = 0, got s = {}", b.s))
            } else if b.d != 1 {
                inconsistent(format!("skeletal certificate needs d = 1, got d = {}", b.d))
            } else if !b.fiber_decomposition.is_skeletal() {
                inconsistent(
                    "skeletal certificate needs every stage declared as a skeleton, in increasing dimension"
                        .to_string(),
                )
            } else {
                Verdict::Pass {
                    rule: CompatibilityRule::Skeletal,
                }
            }
        }
        CompatibilityCertificate::TrivialBundle => {
            if b.structure_group != TRIVIAL_GROUP {
                inconsistent(format!(
                    "trivial-bundle certificate needs structure group `{TRIVIAL_GROUP}`, got `{}`",
                    b.structure_group
                ))
            } else if b.s + 1 != b.d {
                inconsistent(format!(
                    "trivial-bundle certificate needs s = d - 1, got d = {}, s = {}",
                    b.d, b.s
                ))
            } else {
                Verdict::Pass {
                    rule: CompatibilityRule::TrivialBundle,
                }
            }
        }
        CompatibilityCertificate::Verified { reason } => {
            if reason.trim().is_empty() {
                inconsistent("verified certificate carries no justification".to_string())
            } else {
                Verdict::Pass {
                    rule: CompatibilityRule::Verified(reason.clone()),
                }
            }
        }
        CompatibilityCertificate::None => Verdict::Fail {
            reason: FailReason {
                inconsistent: false,
                message: "no compatibility certificate".to_string(),
            },
        },
    }
}

fn require_pass(b: &BundleRecord) -> Result<(), Refusal> {
    match check_compatibility(b) {
        Verdict::Pass { .. } => Ok(()),
        Verdict::Fail { reason } => Err(Refusal {
            bundle: b.name.clone(),
            reason,
        }),
    }
}

/// `Cat(total) <= m + floor(dim B / d)` for a compatible decomposition of
/// length `m`.
pub fn main_theorem_bound(b: &BundleRecord) -> Result<u32, Refusal> {
    require_pass(b)?;
    Ok(b.fiber_decomposition.length() + b.base_stages())
}

/// `Cat(X x Y) <= Cat X + Cat Y`.
pub fn product_bound(cat_x: u32, cat_y: u32) -> u32 {
    cat_x + cat_y
}

/// Without compatibility: `Cat X + 1 <= (Cat F + 1)(Cat B + 1)`.
pub fn general_bundle_bound(cat_f: u32, cat_b: u32) -> u32 {
    (cat_f + 1) * (cat_b + 1) - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerPiece {
    /// Base index: `C(A_i)`, or the base point when 0.
    pub i: u32,
    /// Fibre index: `C(K_j)`, or the base point when 0.
    pub j: u32,
    /// `dim C(A_i) + dim C(K_j)`.
    pub dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerStage {
    pub k: u32,
    pub pieces: Vec<LedgerPiece>,
    /// Cat of the k-th stage is at most this (one more than the previous).
    pub cat_bound: u32,
}

/// Bookkeeping for the filtration `E'_k` of the total space: stage `k`
/// attaches the products `C(A_i) x C(K_j)` with `i + j = k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiltrationLedger {
    pub bundle: String,
    pub m: u32,
    pub n: u32,
    pub d: u32,
    pub s: u32,
    pub stages: Vec<LedgerStage>,
    pub total_bound: u32,
}

pub fn filtration_ledger(b: &BundleRecord) -> Result<FiltrationLedger, Refusal> {
    require_pass(b)?;
    let m = b.fiber_decomposition.length();
    let n = b.base_stages();
    let base_cone_dim = |i: u32| if i == 0 { 0 } else { b.d * i + b.s };
    let fiber_cone_dim = |j: u32| {
        if j == 0 {
            0
        } else {
            b.fiber_decomposition.stages()[j as usize - 1].attach_dim
        }
    };
    let stages = (1..=m + n)
        .map(|k| {
            let pieces = (0..=k.min(n))
                .filter(|&i| k - i <= m)
                .map(|i| LedgerPiece {
                    i,
                    j: k - i,
                    dim: base_cone_dim(i) + fiber_cone_dim(k - i),
                })
                .collect();
            LedgerStage {
                k,
                pieces,
                cat_bound: k,
            }
        })
        .collect();
    Ok(FiltrationLedger {
        bundle: b.name.clone(),
        m,
        n,
        d: b.d,
        s: b.s,
        stages,
        total_bound: m + n,
    })
}

impl FiltrationLedger {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "filtration ledger for bundle {}", self.bundle);
        let _ = writeln!(
            out,
            "fibre stages m = {}, base stages n = {}, d = {}, s = {}",
            self.m, self.n, self.d, self.s
        );
        let rows: Vec<(String, String, String, String)> = self
            .stages
            .iter()
            .map(|st| {
                let pieces = st
                    .pieces
                    .iter()
                    .map(|p| format!("({},{})", p.i, p.j))
                    .collect::<Vec<_>>()
                    .join(" ");
                let dims = st
                    .pieces
                    .iter()
                    .map(|p| p.dim.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                (st.k.to_string(), pieces, dims, st.cat_bound.to_string())
            })
            .collect();
        let header = ("stage", "pieces (i,j)", "dims", "Cat <=");
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(header.1.len());
        let w2 = rows.iter().map(|r| r.2.len()).max().unwrap_or(0).max(header.2.len());
        let _ = writeln!(
            out,
            "{:>5}  {:<w1$}  {:<w2$}  {}",
            header.0, header.1, header.2, header.3
        );
        for (k, pieces, dims, cat) in rows {
            let _ = writeln!(out, "{k:>5}  {pieces:<w1$}  {dims:<w2$}  {cat}");
        }
        let _ = writeln!(out, "Cat(total) <= m + n = {}", self.total_bound);
        out
    }
}
