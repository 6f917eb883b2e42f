//! Placements, edge lengths and numeric realization.
//!
//! Squared lengths are the unit throughout. Graphs with a construction by
//! degree-two additions are realized by circle intersections, one square
//! root per vertex; other graphs are split along 2-separations and any
//! piece without such a construction is solved by damped Gauss–Newton.

mod glue;
mod henneberg;
mod newton;
mod placement;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge, Edge, Graph, Vertex};

pub use glue::glue_realize;
pub use henneberg::{
    henneberg_order, parse_branches, quadratic_realize, realize_all_branches, trilateration_order, BranchOutcome,
    BranchVector, ConstructionOrder,
};
pub use newton::{newton_refine, newton_refine_with, newton_solve, rigidity_jacobian, NewtonOptions};
pub use placement::{
    measure_lengths_exact, random_generic_placement, sign_flips, standard_position, standard_position_exact,
    ExactPlacement, RadicalPlacement,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizationError {
    #[error("placement has {have} points but the graph has {need} vertices")]
    MissingCoordinate { have: usize, need: usize },
    #[error("vertices {0} and {1} coincide")]
    Coincident(Vertex, Vertex),
    #[error("edge lengths do not match the graph: {0}")]
    LengthsMismatch(String),
    #[error("construction order does not rebuild the graph: {0}")]
    InvalidOrder(String),
    #[error("branch vector has length {got}, expected {expected}")]
    BranchLength { expected: usize, got: usize },
    #[error("circles meet in no real point when placing vertex {0}")]
    NegativeDiscriminant(Vertex),
    #[error("neighbors of vertex {0} coincide")]
    DegenerateStep(Vertex),
    #[error("graph is not rigid")]
    NotRigid,
    #[error("iteration did not converge (max relative residual {residual:e})")]
    NotConverged { residual: f64 },
    #[error("no real realization found: {0}")]
    Inconsistent(String),
}

/// Float placement: `coords[v]` is the position of vertex `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub coords: Vec<[f64; 2]>,
}

impl Placement {
    pub fn new(coords: Vec<[f64; 2]>) -> Placement {
        Placement { coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn squared_distance(&self, a: Vertex, b: Vertex) -> f64 {
        sq_dist(self.coords[a], self.coords[b])
    }

    fn check(&self, g: &Graph) -> Result<(), RealizationError> {
        if self.coords.len() < g.n() {
            return Err(RealizationError::MissingCoordinate { have: self.coords.len(), need: g.n() });
        }
        Ok(())
    }
}

pub(crate) fn sq_dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    let (dx, dy) = (p[0] - q[0], p[1] - q[1]);
    dx * dx + dy * dy
}

/// Squared edge lengths aligned with `edges`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengths {
    pub edges: Vec<Edge>,
    pub d: Vec<f64>,
}

impl EdgeLengths {
    pub fn new(edges: Vec<Edge>, d: Vec<f64>) -> Result<EdgeLengths, RealizationError> {
        if edges.len() != d.len() {
            return Err(RealizationError::LengthsMismatch(format!("{} edges but {} lengths", edges.len(), d.len())));
        }
        let edges = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        Ok(EdgeLengths { edges, d })
    }

    /// Squared length of `ab`, if present.
    pub fn get(&self, a: Vertex, b: Vertex) -> Option<f64> {
        let e = edge(a, b);
        self.edges.iter().position(|&x| x == e).map(|i| self.d[i])
    }

    /// Lengths keyed by normalized edge.
    pub fn to_map(&self) -> HashMap<Edge, f64> {
        self.edges.iter().copied().zip(self.d.iter().copied()).collect()
    }

    /// Reorders to `g.edges()`, requiring exactly the edges of `g`.
    pub fn aligned_to(&self, g: &Graph) -> Result<EdgeLengths, RealizationError> {
        let map = self.to_map();
        if map.len() != self.edges.len() {
            return Err(RealizationError::LengthsMismatch("duplicate edge".into()));
        }
        if map.len() != g.m() {
            return Err(RealizationError::LengthsMismatch(format!("{} lengths for {} edges", map.len(), g.m())));
        }
        let d = g
            .edges()
            .iter()
            .map(|e| map.get(e).copied().ok_or_else(|| RealizationError::LengthsMismatch(format!("no length for edge {e:?}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if let Some(x) = d.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(RealizationError::LengthsMismatch(format!("squared length {x} is not a finite nonnegative number")));
        }
        Ok(EdgeLengths { edges: g.edges().to_vec(), d })
    }

    /// Largest `|measured - d| / d` over the edges (absolute error for zero lengths).
    pub fn max_relative_residual(&self, measured: &EdgeLengths) -> f64 {
        let map = measured.to_map();
        self.edges
            .iter()
            .zip(&self.d)
            .map(|(e, &want)| {
                let got = map.get(e).copied().unwrap_or(f64::INFINITY);
                let err = (got - want).abs();
                if want > 0.0 {
                    err / want
                } else {
                    err
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Squared length of every edge of `g`, in edge order.
pub fn measure_lengths(g: &Graph, p: &Placement) -> Result<EdgeLengths, RealizationError> {
    p.check(g)?;
    Ok(EdgeLengths { edges: g.edges().to_vec(), d: g.edges().iter().map(|&(a, b)| p.squared_distance(a, b)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn measures_a_345_triangle() {
        let p = Placement::new(vec![[0.0, 0.0], [0.0, 5.0], [2.4, 1.8]]);
        let d = measure_lengths(&complete(3), &p).unwrap();
        assert_eq!(d.edges, vec![(0, 1), (0, 2), (1, 2)]);
        for (got, want) in d.d.iter().zip([25.0, 9.0, 16.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_and_translated_placements() {
        let g = wheel(6);
        let zero = measure_lengths(&g, &Placement::new(vec![[1.5, -2.0]; 6])).unwrap();
        assert!(zero.d.iter().all(|&x| x == 0.0));
        let p = Placement::new((0..6).map(|i| [i as f64, (i * i) as f64]).collect());
        let q = Placement::new(p.coords.iter().map(|c| [c[0] + 3.0, c[1] - 7.0]).collect());
        assert_eq!(measure_lengths(&g, &p).unwrap(), measure_lengths(&g, &q).unwrap());
        assert!(matches!(
            measure_lengths(&g, &Placement::new(vec![[0.0, 0.0]; 5])),
            Err(RealizationError::MissingCoordinate { have: 5, need: 6 })
        ));
    }

    #[test]
    fn lengths_alignment() {
        let g = complete(3);
        let d = EdgeLengths::new(vec![(2, 1), (0, 1), (0, 2)], vec![16.0, 25.0, 9.0]).unwrap();
        assert_eq!(d.aligned_to(&g).unwrap().d, vec![25.0, 9.0, 16.0]);
        let short = EdgeLengths::new(vec![(0, 1)], vec![1.0]).unwrap();
        assert!(short.aligned_to(&g).is_err());
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"edges":[[1,2],[0,1],[0,2]],"d":[16.0,25.0,9.0]}"#);
    }
}
