use serde::Serialize;

use super::DecompositionError;
use crate::connectivity::{enumerate_2_separations, is_k_connected, TwoSeparation};
use crate::graph::{edge, Edge, Graph, Piece, Vertex};
use crate::rigidity::is_rigid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum UnitKind {
    Triangle,
    ThreeConnected,
}

/// A cleavage unit. Vertices and edges carry the ids of the decomposed
/// graph; `vertices[i]` is the origin of local vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CleavageUnit {
    pub kind: UnitKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// `virtual_edges[i]` marks `edges[i]` as added by a split rather than
    /// taken from the original graph.
    pub virtual_edges: Vec<bool>,
}

impl CleavageUnit {
    /// The unit as a standalone graph on local ids.
    pub fn piece(&self) -> Piece {
        Piece::from_host_edges(&self.edges, &self.vertices)
    }

    /// Sorted edge list, ignoring virtual flags.
    pub fn shape(&self) -> Vec<Edge> {
        let mut es = self.edges.clone();
        es.sort_unstable();
        es
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "type")]
pub enum SplitTree {
    Unit { index: usize },
    Split { separator: (Vertex, Vertex), children: Vec<SplitTree> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CleavageDecomposition {
    pub units: Vec<CleavageUnit>,
    pub tree: SplitTree,
}

impl CleavageDecomposition {
    /// Real edges of all units; equals the edge set of the decomposed graph.
    pub fn reconstruct(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = self
            .units
            .iter()
            .flat_map(|u| u.edges.iter().zip(&u.virtual_edges).filter(|(_, &v)| !v).map(|(&e, _)| e))
            .collect();
        es.sort_unstable();
        es
    }

    /// Unit shapes as a sorted multiset.
    pub fn unit_multiset(&self) -> Vec<Vec<Edge>> {
        let mut shapes: Vec<Vec<Edge>> = self.units.iter().map(|u| u.shape()).collect();
        shapes.sort();
        shapes
    }
}

pub fn cleavage_units(g: &Graph) -> Result<CleavageDecomposition, DecompositionError> {
    cleavage_units_by(g, |_| 0)
}

/// Decomposes using `choose` to pick which 2-separation to split at, given
/// the full list for the current piece (host ids).
pub fn cleavage_units_by(
    g: &Graph,
    mut choose: impl FnMut(&[TwoSeparation]) -> usize,
) -> Result<CleavageDecomposition, DecompositionError> {
    if g.n() < 3 {
        return Err(DecompositionError::TooSmall(g.n()));
    }
    if !is_rigid(g) {
        return Err(DecompositionError::NotRigid);
    }
    let edges: Vec<(Edge, bool)> = g.edges().iter().map(|&e| (e, false)).collect();
    let mut units = Vec::new();
    let tree = split(&edges, &mut units, &mut choose);
    Ok(CleavageDecomposition { units, tree })
}

fn split(
    edges: &[(Edge, bool)],
    units: &mut Vec<CleavageUnit>,
    choose: &mut impl FnMut(&[TwoSeparation]) -> usize,
) -> SplitTree {
    let host: Vec<Edge> = edges.iter().map(|&(e, _)| e).collect();
    let piece = Piece::from_host_edges(&host, &[]);
    let g = &piece.graph;
    let triangle = g.n() == 3 && g.m() == 3;
    if triangle || is_k_connected(g, 3) {
        units.push(CleavageUnit {
            kind: if triangle { UnitKind::Triangle } else { UnitKind::ThreeConnected },
            vertices: piece.origin.clone(),
            edges: host,
            virtual_edges: edges.iter().map(|&(_, v)| v).collect(),
        });
        return SplitTree::Unit { index: units.len() - 1 };
    }
    let seps: Vec<TwoSeparation> = enumerate_2_separations(g)
        .expect("rigid pieces are 2-connected")
        .into_iter()
        .map(|s| to_host(&s, &piece.origin))
        .collect();
    let s = &seps[choose(&seps).min(seps.len() - 1)];
    let uv = s.separator;
    let flag = |e: &Edge| edges.iter().find(|(x, _)| x == e).map(|&(_, v)| v).expect("edge of piece");
    let mut left: Vec<(Edge, bool)> = s.side1.iter().map(|e| (*e, flag(e))).collect();
    if !s.side1.contains(&uv) {
        left.push((uv, true));
    }
    let mut right: Vec<(Edge, bool)> = s.side2.iter().map(|e| (*e, flag(e))).collect();
    right.push((uv, true));
    let a = split(&left, units, choose);
    let b = split(&right, units, choose);
    SplitTree::Split { separator: uv, children: vec![a, b] }
}

pub(crate) fn to_host(s: &TwoSeparation, origin: &[Vertex]) -> TwoSeparation {
    let e = |&(a, b): &Edge| edge(origin[a], origin[b]);
    TwoSeparation {
        separator: e(&s.separator),
        side1: s.side1.iter().map(e).collect(),
        side2: s.side2.iter().map(e).collect(),
        vertex_side1: s.vertex_side1.iter().map(|&v| origin[v]).collect(),
        vertex_side2: s.vertex_side2.iter().map(|&v| origin[v]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn k4_is_its_own_unit() {
        let d = cleavage_units(&complete(4)).unwrap();
        assert_eq!(d.units.len(), 1);
        assert_eq!(d.units[0].kind, UnitKind::ThreeConnected);
        assert_eq!(d.tree, SplitTree::Unit { index: 0 });
    }

    #[test]
    fn k4_minus_edge_splits_into_triangles() {
        let d = cleavage_units(&k4_minus_edge()).unwrap();
        assert_eq!(d.units.len(), 2);
        assert_eq!(d.units[0].edges, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(d.units[0].virtual_edges, vec![false; 3]);
        assert_eq!(d.units[1].vertices, vec![0, 1, 3]);
        let virt: Vec<Edge> =
            d.units[1].edges.iter().zip(&d.units[1].virtual_edges).filter(|(_, &v)| v).map(|(&e, _)| e).collect();
        assert_eq!(virt, vec![(0, 1)]);
        assert_eq!(d.reconstruct(), k4_minus_edge().sorted_edges());
    }

    #[test]
    fn glued_pair_gives_two_k4() {
        let g = two_k4_minus_uv();
        let d = cleavage_units(&g).unwrap();
        assert_eq!(d.units.len(), 2);
        for u in &d.units {
            assert_eq!(u.kind, UnitKind::ThreeConnected);
            assert_eq!(u.edges.len(), 6);
            let i = u.edges.iter().position(|&e| e == (0, 1)).unwrap();
            assert!(u.virtual_edges[i]);
        }
        assert_eq!(d.reconstruct(), g.sorted_edges());
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(cleavage_units(&cycle(4)), Err(DecompositionError::NotRigid));
        assert_eq!(cleavage_units(&complete(2)), Err(DecompositionError::TooSmall(2)));
    }
}
