use std::collections::HashMap;

use serde::Serialize;

use super::DecompositionError;
use crate::connectivity::is_k_connected;
use crate::graph::{edge, Edge, Graph, Vertex};
use crate::planarity::{is_planar, planar_embedding};
use crate::rigidity::{is_minimally_rigid, is_rigid, redundancy, RedundancyReport};

/// One step of replacing a redundantly rigid component by a wheel with a
/// rim edge removed.
///
/// `component`, `rim_vertices` and `removed_rim_edge` use the ids of the
/// input graph. `result` has its own dense ids; `origin[i]` is the input id
/// of result vertex `i`, and the hub (the last vertex) has origin `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WheelReplacement {
    pub component: Vec<Edge>,
    /// The attachment set `U`, in rim order.
    pub rim_vertices: Vec<Vertex>,
    pub hub: Vertex,
    pub removed_rim_edge: Edge,
    #[serde(serialize_with = "ser_graph")]
    pub result: Graph,
    pub origin: Vec<Option<Vertex>>,
    pub planar_mode: bool,
    pub excess_before: usize,
    pub excess_after: usize,
}

fn ser_graph<S: serde::Serializer>(g: &Graph, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Graph", 2)?;
    st.serialize_field("n", &g.n())?;
    st.serialize_field("edges", &g.edges().iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>())?;
    st.end()
}

/// `|E| - 2|V| + 3`, the number of edges above minimal rigidity.
pub fn excess(g: &Graph) -> usize {
    (g.m() + 3).saturating_sub(2 * g.n())
}

pub fn wheel_replace(g: &Graph, planar_mode: bool) -> Result<WheelReplacement, DecompositionError> {
    if !is_k_connected(g, 3) {
        return Err(DecompositionError::NotThreeConnected);
    }
    if !is_rigid(g) {
        return Err(DecompositionError::NotRigid);
    }
    let embedding = if planar_mode { Some(planar_embedding(g).ok_or(DecompositionError::NotPlanar)?) } else { None };
    let report = redundancy(g);
    if report.components.is_empty() {
        return Err(DecompositionError::NoNontrivialComponent);
    }

    let mut best_rim = 0;
    let mut chosen = None;
    for comp in &report.components {
        let u = attachments(g, comp);
        if u.len() >= 3 {
            chosen = Some((comp.clone(), u));
            break;
        }
        best_rim = best_rim.max(u.len());
    }
    let (component, rim_set) = chosen.ok_or(DecompositionError::RimTooSmall(best_rim))?;
    let v1 = RedundancyReport::component_vertices(&component);
    let interior: Vec<Vertex> = v1.iter().copied().filter(|v| rim_set.binary_search(v).is_err()).collect();
    let is_interior = |v: Vertex| interior.binary_search(&v).is_ok();

    let orders: Vec<Vec<Vertex>> = match &embedding {
        None => vec![rim_set.clone()],
        Some(emb) => {
            // Faces of G - (V1 \ U) that carry every attachment vertex.
            let outer = emb.restrict(|(a, b)| !is_interior(a) && !is_interior(b));
            let mut found = Vec::new();
            for face in outer.faces() {
                let mut order = Vec::new();
                for &(t, _) in &face {
                    if rim_set.binary_search(&t).is_ok() && !order.contains(&t) {
                        order.push(t);
                    }
                }
                if order.len() == rim_set.len() && !found.contains(&order) {
                    found.push(order);
                }
            }
            if found.is_empty() {
                return Err(DecompositionError::NoCommonFace);
            }
            found
        }
    };

    let in_component: Vec<bool> = g.edges().iter().map(|e| component.binary_search(e).is_ok()).collect();
    let kept: Vec<Vertex> = (0..g.n()).filter(|&v| !is_interior(v)).collect();
    let hub = kept.len();
    let local: HashMap<Vertex, Vertex> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut origin: Vec<Option<Vertex>> = kept.iter().map(|&v| Some(v)).collect();
    origin.push(None);

    for order in orders {
        let k = order.len();
        let rim: Vec<Edge> = (0..k).map(|i| edge(order[i], order[(i + 1) % k])).collect();
        let mut full = Graph::empty(hub + 1);
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            if !in_component[i] {
                full.add_edge(local[&a], local[&b]).expect("edges outside the component avoid its interior");
            }
        }
        for &u in &order {
            full.add_edge(local[&u], hub).expect("fresh spoke");
        }
        for &(a, b) in &rim {
            full.add_edge(local[&a], local[&b]).map_err(|_| DecompositionError::TheoryViolation(format!(
                "rim edge ({a}, {b}) already present outside the component"
            )))?;
        }
        if planar_mode && !is_planar(&full) {
            continue;
        }
        if let Some(&u) = order.iter().find(|&&u| full.degree(local[&u]) < 4) {
            return Err(DecompositionError::LowRimDegree(u));
        }
        let mut candidates = rim.clone();
        candidates.sort_unstable();
        let Some((removed, result)) = candidates.into_iter().find_map(|(a, b)| {
            let r = full.without_edge(local[&a], local[&b]);
            is_k_connected(&r, 3).then_some(((a, b), r))
        }) else {
            return Err(DecompositionError::TheoryViolation(
                "no rim edge leaves the replacement 3-connected".into(),
            ));
        };
        if !is_rigid(&result) {
            return Err(DecompositionError::TheoryViolation("replacement is not rigid".into()));
        }
        let (before, after) = (excess(g), excess(&result));
        if after >= before {
            return Err(DecompositionError::TheoryViolation(format!("excess did not drop ({before} -> {after})")));
        }
        return Ok(WheelReplacement {
            component,
            rim_vertices: order,
            hub,
            removed_rim_edge: removed,
            result,
            origin,
            planar_mode,
            excess_before: before,
            excess_after: after,
        });
    }
    Err(DecompositionError::TheoryViolation("no face order of the attachments gives a planar wheel".into()))
}

/// Applies `wheel_replace` until the graph is minimally rigid.
pub fn reduce_to_minimal(g: &Graph, planar_mode: bool) -> Result<Vec<WheelReplacement>, DecompositionError> {
    let mut steps = Vec::new();
    let mut cur = g.clone();
    while !is_minimally_rigid(&cur) {
        if steps.len() > g.m() {
            return Err(DecompositionError::TheoryViolation("reduction did not terminate".into()));
        }
        let step = wheel_replace(&cur, planar_mode)?;
        cur = step.result.clone();
        steps.push(step);
    }
    Ok(steps)
}

/// Vertices of the component incident to edges outside it, sorted.
fn attachments(g: &Graph, component: &[Edge]) -> Vec<Vertex> {
    let vs = RedundancyReport::component_vertices(component);
    vs.into_iter()
        .filter(|&v| g.neighbors(v).iter().any(|&w| component.binary_search(&edge(v, w)).is_err()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::planarity::is_planar;

    /// Prism on triangles 0-1-2 / 4-5-6 with vertex 3 joined to 0, 1, 2,
    /// so that {0,1,2,3} spans a K4.
    fn capped_prism() -> Graph {
        Graph::new(7, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 5), (2, 6), (4, 5), (5, 6), (4, 6)])
            .unwrap()
    }

    #[test]
    fn prism_with_chord_is_a_single_circuit() {
        let g = prism().with_edge(0, 4);
        assert_eq!(wheel_replace(&g, false), Err(DecompositionError::RimTooSmall(0)));
    }

    #[test]
    fn capped_prism_reduces() {
        let g = capped_prism();
        assert_eq!(redundancy(&g).components, vec![complete(4).sorted_edges()]);
        for planar in [false, true] {
            let w = wheel_replace(&g, planar).unwrap();
            assert!(is_k_connected(&w.result, 3));
            assert!(is_rigid(&w.result));
            assert!(w.excess_after < w.excess_before);
            assert_eq!(w.rim_vertices.len(), 3);
            assert_eq!((w.result.n(), w.result.m()), (7, 11));
            if planar {
                assert!(is_planar(&w.result));
            }
        }
    }

    #[test]
    fn minimally_rigid_has_no_component() {
        assert_eq!(wheel_replace(&prism(), false), Err(DecompositionError::NoNontrivialComponent));
    }

    #[test]
    fn complete_graph_has_empty_rim() {
        assert_eq!(wheel_replace(&complete(5), false), Err(DecompositionError::RimTooSmall(0)));
    }

    #[test]
    fn rejects_non_planar_in_planar_mode() {
        let g = complete_bipartite(3, 3).with_edge(0, 1);
        assert_eq!(wheel_replace(&g, true), Err(DecompositionError::NotPlanar));
    }

    #[test]
    fn iterated_reduction_terminates_minimal() {
        let steps = reduce_to_minimal(&capped_prism(), true).unwrap();
        assert!(!steps.is_empty());
        let last = &steps.last().unwrap().result;
        assert!(is_minimally_rigid(last));
        assert!(is_planar(last));
        assert!(is_k_connected(last, 3));
    }
}
