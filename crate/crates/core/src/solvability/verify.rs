use thiserror::Error;

use super::decide::{host_redundancy, rigid_edges, sorted, vertices_of, Node, Plan};
use super::{CertNode, Decision, Mode, Step, Verdict};
use crate::connectivity::is_k_connected;
use crate::graph::{edge, Edge, Graph, Piece, Vertex};
use crate::planarity::is_planar;
use crate::rigidity::is_globally_rigid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyFailure {
    #[error("certificate root does not match the input graph")]
    RootMismatch,
    #[error("mode should be {expected:?}")]
    WrongMode { expected: Mode },
    #[error("reported verdict or witness disagrees with the certificate tree")]
    Inconsistent,
    #[error("node on {vertices:?}: {reason}")]
    Node { vertices: Vec<Vertex>, reason: String },
}

pub fn verify_certificate(g: &Graph, decision: &Decision) -> bool {
    check_certificate(g, decision).is_ok()
}

/// Checks every node of the tree and reports the first failure.
///
/// Leaves are re-checked directly. A split node must be rebuilt from its
/// children by the gluing operations: an edge split is the union of two
/// graphs sharing the separator edge, a rigid split is that union with the
/// shared edge removed from both (both remainders rigid), and a triangle
/// split starts from the triangle `uvw` and swaps each of its edges for the
/// matching child.
pub fn check_certificate(g: &Graph, decision: &Decision) -> Result<(), VerifyFailure> {
    let root = &decision.certificate;
    let expected_vertices: Vec<Vertex> = (0..g.n()).collect();
    if g.n() == 0 || root.edges != g.sorted_edges() || root.vertices != expected_vertices {
        return Err(VerifyFailure::RootMismatch);
    }
    let expected = if is_planar(g) { Mode::Exact } else { Mode::Conjectural };
    if decision.mode != expected {
        return Err(VerifyFailure::WrongMode { expected });
    }
    check_node(root)?;
    if decision.verdict != root.verdict || decision.witness.as_ref() != root.first_failure() {
        return Err(VerifyFailure::Inconsistent);
    }
    Ok(())
}

fn check_node(node: &CertNode) -> Result<(), VerifyFailure> {
    let fail = |reason: String| VerifyFailure::Node { vertices: node.vertices.clone(), reason };
    if node.edges.iter().any(|&(a, b)| a >= b) || node.edges.windows(2).any(|w| w[0] >= w[1]) {
        return Err(fail("edges are not sorted and normalized".into()));
    }
    let single_vertex = node.edges.is_empty() && node.vertices.len() == 1;
    if !single_vertex && node.vertices != vertices_of(&node.edges) {
        return Err(fail("vertex list does not match the edges".into()));
    }
    if !single_vertex && !rigid_edges(&node.edges) {
        return Err(fail("graph is not rigid".into()));
    }
    let graph = Piece::from_host_edges(&node.edges, &node.vertices).graph;
    let leaf_verdict = |want: Verdict| {
        if node.verdict == want {
            Ok(())
        } else {
            Err(fail(format!("leaf verdict should be {want:?}")))
        }
    };

    match &node.step {
        Step::SmallLeaf => {
            if graph.n() > 3 || !graph.is_complete() {
                return Err(fail("not K1, K2 or K3".into()));
            }
            leaf_verdict(Verdict::Yes)
        }
        Step::GloballyRigidLeaf => {
            if !is_globally_rigid(&graph) {
                return Err(fail("not globally rigid".into()));
            }
            leaf_verdict(Verdict::Yes)
        }
        Step::NotRedundantlyRigid { redundancy } => {
            if !is_k_connected(&graph, 3) {
                return Err(fail("not 3-connected".into()));
            }
            if *redundancy != host_redundancy(&node.edges) || redundancy.trivial_components.is_empty() {
                return Err(fail("redundancy report is wrong or shows a redundantly rigid graph".into()));
            }
            leaf_verdict(Verdict::No)
        }
        Step::Stuck { separator, nonrigid_side } => {
            if graph.n() <= 3 || is_k_connected(&graph, 3) {
                return Err(fail("stuck leaf on a graph without 2-separations".into()));
            }
            let n = Node::new(&node.edges);
            let Plan::Stuck { index, nonrigid } = n.default_plan() else {
                return Err(fail("a sound split exists".into()));
            };
            let s = &n.seps[index];
            let side = if nonrigid == 1 { &s.vertex_side1 } else { &s.vertex_side2 };
            if s.separator != *separator || side != nonrigid_side {
                return Err(fail("stuck configuration differs from the minimal non-rigid side".into()));
            }
            leaf_verdict(Verdict::No)
        }
        Step::EdgeSplit { separator, children } => {
            let [a, b] = two(children).ok_or_else(|| fail("edge split needs two children".into()))?;
            let e = edge(separator.0, separator.1);
            if !contains(&a.edges, e) || !contains(&b.edges, e) {
                return Err(fail("separator edge missing from a child".into()));
            }
            let glued = union(a, b, e).map_err(fail)?;
            finish(node, &glued, children)
        }
        Step::RigidSplit { separator, children } => {
            let [a, b] = two(children).ok_or_else(|| fail("rigid split needs two children".into()))?;
            let e = edge(separator.0, separator.1);
            if !contains(&a.edges, e) || !contains(&b.edges, e) {
                return Err(fail("separator edge missing from a child".into()));
            }
            let (ra, rb) = (remove(&a.edges, e), remove(&b.edges, e));
            if !rigid_edges(&ra) || !rigid_edges(&rb) {
                return Err(fail("a side is not rigid without the separator edge".into()));
            }
            union(a, b, e).map_err(fail)?;
            finish(node, &sorted(ra.into_iter().chain(rb).collect()), children)
        }
        Step::TriangleSplit { u, v, w, children } => {
            let [a, b, c] = children.as_slice() else {
                return Err(fail("triangle split needs three children".into()));
            };
            let (u, v, w) = (*u, *v, *w);
            if u == v || v == w || u == w {
                return Err(fail("triangle vertices must be distinct".into()));
            }
            for (x, y, want) in [(a, b, w), (a, c, u), (b, c, v)] {
                if common(&x.vertices, &y.vertices) != [want] {
                    return Err(fail(format!("children must meet exactly at vertex {want}")));
                }
            }
            let mut f = sorted(vec![edge(u, v), edge(v, w), edge(u, w)]);
            for (child, e) in [(a, edge(u, w)), (b, edge(v, w)), (c, edge(u, v))] {
                if child.vertices.len() == 2 {
                    // A bare edge leaves the triangle edge in place.
                    if child.edges != [e] {
                        return Err(fail("two-vertex child must be the triangle edge".into()));
                    }
                    continue;
                }
                f = replace_edge(&f, e, child).map_err(fail)?;
            }
            finish(node, &f, children)
        }
    }
}

fn two(children: &[CertNode]) -> Option<[&CertNode; 2]> {
    match children {
        [a, b] => Some([a, b]),
        _ => None,
    }
}

fn contains(edges: &[Edge], e: Edge) -> bool {
    edges.binary_search(&e).is_ok()
}

fn remove(edges: &[Edge], e: Edge) -> Vec<Edge> {
    edges.iter().copied().filter(|&x| x != e).collect()
}

fn common(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect()
}

/// Both graphs must have at least three vertices and meet exactly at the
/// endpoints of `e`.
fn check_overlap(a: &[Vertex], b: &[Vertex], e: Edge) -> Result<(), String> {
    if a.len() < 3 || b.len() < 3 {
        return Err("glued graphs need at least three vertices".into());
    }
    if common(a, b) != [e.0, e.1] {
        return Err(format!("glued graphs must meet exactly at {{{}, {}}}", e.0, e.1));
    }
    Ok(())
}

/// `A u B` for graphs meeting at the endpoints of `e`.
fn union(a: &CertNode, b: &CertNode, e: Edge) -> Result<Vec<Edge>, String> {
    check_overlap(&a.vertices, &b.vertices, e)?;
    Ok(sorted(a.edges.iter().chain(&b.edges).copied().collect()))
}

/// `(F - e) u G2` where `e` is an edge of `F` and `G2` meets `F` at its ends.
fn replace_edge(f: &[Edge], e: Edge, g2: &CertNode) -> Result<Vec<Edge>, String> {
    if !contains(f, e) {
        return Err(format!("edge {e:?} is not available to replace"));
    }
    check_overlap(&vertices_of(f), &g2.vertices, e)?;
    Ok(sorted(remove(f, e).into_iter().chain(g2.edges.iter().copied()).collect()))
}

fn finish(node: &CertNode, glued: &[Edge], children: &[CertNode]) -> Result<(), VerifyFailure> {
    let fail = |reason: &str| VerifyFailure::Node { vertices: node.vertices.clone(), reason: reason.into() };
    if glued != node.edges {
        return Err(fail("children do not reassemble to this node"));
    }
    let verdict = if children.iter().all(|c| c.verdict.is_yes()) { Verdict::Yes } else { Verdict::No };
    if verdict != node.verdict {
        return Err(fail("verdict is not the conjunction of the children"));
    }
    children.iter().try_for_each(check_node)
}
