//! Cleavage-unit decomposition of rigid graphs along 2-separations, and
//! wheel replacement of redundantly rigid components.

mod cleavage;
mod wheel;

use thiserror::Error;

pub use cleavage::{
    cleavage_units, cleavage_units_by, CleavageDecomposition, CleavageUnit, SplitTree, UnitKind,
};
pub(crate) use cleavage::to_host;
pub use wheel::{excess, reduce_to_minimal, wheel_replace, WheelReplacement};

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("graph is not rigid")]
    NotRigid,
    #[error("graph has {0} vertices; at least 3 are required")]
    TooSmall(usize),
    #[error("graph is not 3-connected")]
    NotThreeConnected,
    #[error("planar mode requested for a non-planar graph")]
    NotPlanar,
    #[error("graph is minimally rigid: no nontrivial redundantly rigid component")]
    NoNontrivialComponent,
    #[error("no nontrivial redundantly rigid component has 3 or more attachment vertices (largest has {0})")]
    RimTooSmall(usize),
    #[error("rim vertex {0} has degree below 4 after adding the wheel")]
    LowRimDegree(Vertex),
    #[error("no face of the embedding carries every attachment vertex")]
    NoCommonFace,
    #[error("theory violation: {0}")]
    TheoryViolation(String),
}
