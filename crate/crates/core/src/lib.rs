//! Combinatorial rigidity and radical solvability of 2D bar-joint frameworks.

pub mod connectivity;
pub mod graph;
pub mod planarity;
pub mod rigidity;
pub mod decomposition;
pub mod solvability;
pub mod realization;
pub mod selftest;
