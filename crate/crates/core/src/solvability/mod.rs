//! Quadratic / radical solvability of rigid graphs.
//!
//! The decider recurses over 2-separations. A separation whose separator is
//! an edge, or whose two sides are both rigid, splits the problem into the
//! two sides with the separator edge added. Otherwise one side is not rigid;
//! taking such a side with fewest vertices, a vertex `w` separating the two
//! separator vertices inside it splits the graph into three rigid parts
//! glued pairwise at single vertices. Three-connected pieces are solvable
//! exactly when they are redundantly rigid. Every step is an equivalence, so
//! the resulting tree doubles as a certificate that replays the gluing
//! operations of the solvable family.
//!
//! Verdicts are proven for planar inputs and rest on the standing
//! conjecture otherwise; `Mode` records which.

mod closure;
mod decide;
mod verify;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Vertex};
use crate::rigidity::RedundancyReport;

pub use closure::{f_closure_oracle, FamilyClosure, MAX_CLOSURE_VERTICES};
pub use decide::{admissible_first_splits, decide_solvability, decide_with_first_split};
pub use verify::{check_certificate, verify_certificate, VerifyFailure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    fn and(self, other: Verdict) -> Verdict {
        if self.is_yes() && other.is_yes() {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Backed by the planar characterisation.
    Exact,
    /// Non-planar input; the verdict relies on the conjectured extension.
    Conjectural,
}

/// One node of a decision tree. `vertices` and `edges` are in the ids of the
/// root graph; separator edges added by a split may not be edges of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CertNode {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub verdict: Verdict,
    #[serde(flatten)]
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Step {
    /// `K1`, `K2` or `K3`.
    SmallLeaf,
    GloballyRigidLeaf,
    /// Three-connected but not redundantly rigid.
    #[serde(rename_all = "camelCase")]
    NotRedundantlyRigid { redundancy: RedundancyReport },
    /// No usable separation: every separator is a non-edge with exactly one
    /// rigid side, and the smallest non-rigid side has no vertex separating
    /// the separator pair.
    #[serde(rename_all = "camelCase")]
    Stuck { separator: (Vertex, Vertex), nonrigid_side: Vec<Vertex> },
    /// Separator `uv` is an edge: children are `H1` (holding `uv`) and `H2 + uv`.
    #[serde(rename_all = "camelCase")]
    EdgeSplit { separator: (Vertex, Vertex), children: Vec<CertNode> },
    /// Separator `uv` is not an edge and both sides are rigid: children are
    /// `H1 + uv` and `H2 + uv`.
    #[serde(rename_all = "camelCase")]
    RigidSplit { separator: (Vertex, Vertex), children: Vec<CertNode> },
    /// Children are `H1'` (through `u` and `w`), `H1''` (through `v` and `w`)
    /// and `H2` (through `u` and `v`).
    #[serde(rename_all = "camelCase")]
    TriangleSplit { u: Vertex, v: Vertex, w: Vertex, children: Vec<CertNode> },
}

impl CertNode {
    pub fn children(&self) -> &[CertNode] {
        match &self.step {
            Step::EdgeSplit { children, .. } | Step::RigidSplit { children, .. } | Step::TriangleSplit { children, .. } => {
                children
            }
            _ => &[],
        }
    }

    /// First leaf (depth-first) with a negative verdict.
    pub fn first_failure(&self) -> Option<&CertNode> {
        if self.verdict.is_yes() {
            return None;
        }
        match &self.step {
            Step::NotRedundantlyRigid { .. } | Step::Stuck { .. } => Some(self),
            _ => self.children().iter().find_map(|c| c.first_failure()),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }
}

/// Outcome of the decider: verdict, mode, the full decision tree and, for a
/// negative verdict, the failing leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Decision {
    pub verdict: Verdict,
    pub mode: Mode,
    pub certificate: CertNode,
    pub witness: Option<CertNode>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolvabilityError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not rigid")]
    NotRigid,
    #[error("first split index {0} is not an admissible 2-separation")]
    InadmissibleSplit(usize),
    #[error("closure oracle supports at most {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("theory violation: {0}")]
    TheoryViolation(String),
}
