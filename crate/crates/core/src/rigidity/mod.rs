//! Generic rigidity in the plane.
//!
//! Rank of the generic 2D rigidity matroid comes from the (2,3)-pebble game;
//! a randomized rigidity-matrix rank over a prime field serves as an
//! independent check.

mod oracle;
mod pebble;

use serde::{Deserialize, Serialize};

pub use oracle::{matrix_rank_oracle, rigidity_rank_mod_p, PRIME};
pub(crate) use oracle::inv as inv_mod_p;
pub use pebble::PebbleGame;

use crate::connectivity::is_k_connected;
use crate::graph::{Edge, Graph, Vertex};

/// Runs the pebble game over the edges of `g` in their stored order.
pub fn pebble_game(g: &Graph) -> PebbleGame {
    let mut pg = PebbleGame::new(g.n());
    for &(u, v) in g.edges() {
        pg.add_edge(u, v);
    }
    pg
}

pub fn generic_rank(g: &Graph) -> usize {
    pebble_game(g).rank()
}

/// `K1` and `K2` count as rigid; otherwise rank must reach `2n - 3`.
pub fn is_rigid(g: &Graph) -> bool {
    g.n() <= 1 || generic_rank(g) == 2 * g.n() - 3
}

pub fn is_minimally_rigid(g: &Graph) -> bool {
    if g.n() <= 1 {
        return g.m() == 0;
    }
    g.m() == 2 * g.n() - 3 && is_rigid(g)
}

/// Maximal rigid subgraphs, as edge sets. They partition the edges; two of
/// them share at most one vertex. Each list is sorted and the lists are
/// ordered by their first edge.
pub fn rigid_components(g: &Graph) -> Vec<Vec<Edge>> {
    let mut pg = pebble_game(g);
    let mut assigned = vec![false; g.m()];
    let mut out = Vec::new();
    let mut sorted: Vec<(usize, Edge)> = g.edges().iter().copied().enumerate().collect();
    sorted.sort_by_key(|&(_, e)| e);
    for &(i, (u, v)) in &sorted {
        if assigned[i] {
            continue;
        }
        let mut inside = vec![false; g.n()];
        inside[u] = true;
        inside[v] = true;
        for (w, flag) in inside.iter_mut().enumerate() {
            if w != u && w != v && g.degree(w) > 0 && !pg.is_independent(u, w) && !pg.is_independent(v, w) {
                *flag = true;
            }
        }
        let mut comp = Vec::new();
        for (j, &(a, b)) in g.edges().iter().enumerate() {
            if inside[a] && inside[b] {
                debug_assert!(!assigned[j], "rigid components overlap on an edge");
                assigned[j] = true;
                comp.push((a, b));
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Redundant edges and redundantly rigid components of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RedundancyReport {
    pub rank: usize,
    pub redundant_edges: Vec<Edge>,
    /// Nontrivial redundantly rigid components (maximal redundantly rigid subgraphs).
    pub components: Vec<Vec<Edge>>,
    /// Edges lying in no redundantly rigid subgraph.
    pub trivial_components: Vec<Edge>,
}

impl RedundancyReport {
    pub fn component_vertices(component: &[Edge]) -> Vec<Vertex> {
        let mut vs: Vec<Vertex> = component.iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }
}

/// Computes redundancy from fundamental circuits.
///
/// With `B` the pebble-game basis, the fundamental circuit of a non-basis
/// edge `f` is `f` together with every `e` in `B` for which `B - e + f` is
/// independent. An edge is redundant exactly when it lies on one of these
/// circuits. Circuits are rigid, so each lies inside one rigid component of
/// the redundant subgraph; those rigid components are the maximal
/// redundantly rigid subgraphs.
pub fn redundancy(g: &Graph) -> RedundancyReport {
    let base = pebble_game(g);
    let basis: Vec<Edge> = base.accepted().to_vec();
    let mut sorted_basis = basis.clone();
    sorted_basis.sort_unstable();
    let non_basis: Vec<Edge> = g.edges().iter().copied().filter(|e| sorted_basis.binary_search(e).is_err()).collect();

    let mut redundant = vec![false; g.m()];
    for &f in &non_basis {
        redundant[g.edge_index(f.0, f.1).unwrap()] = true;
    }
    if !non_basis.is_empty() {
        for (skip, &e) in basis.iter().enumerate() {
            let mut pg = PebbleGame::new(g.n());
            for (j, &(a, b)) in basis.iter().enumerate() {
                if j != skip {
                    pg.add_edge(a, b);
                }
            }
            if non_basis.iter().any(|&(a, b)| pg.is_independent(a, b)) {
                redundant[g.edge_index(e.0, e.1).unwrap()] = true;
            }
        }
    }

    let redundant_graph = g.spanning_subgraph(|i, _| redundant[i]);
    let components: Vec<Vec<Edge>> = if redundant_graph.m() == 0 { Vec::new() } else { rigid_components(&redundant_graph) };
    let mut redundant_edges: Vec<Edge> = redundant_graph.edges().to_vec();
    redundant_edges.sort_unstable();
    let mut trivial: Vec<Edge> = g.edges().iter().enumerate().filter(|(i, _)| !redundant[*i]).map(|(_, &e)| e).collect();
    trivial.sort_unstable();
    RedundancyReport { rank: base.rank(), redundant_edges, components, trivial_components: trivial }
}

/// Rigid, and still rigid after deleting any single edge.
pub fn is_redundantly_rigid(g: &Graph) -> bool {
    if !is_rigid(g) {
        return false;
    }
    let r = redundancy(g);
    r.trivial_components.is_empty()
}

/// Complete on at most three vertices, or 3-connected and redundantly rigid.
pub fn is_globally_rigid(g: &Graph) -> bool {
    if g.n() <= 3 {
        return g.is_complete();
    }
    is_k_connected(g, 3) && is_redundantly_rigid(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    /// Brute-force rank: the largest edge subset whose every sub-subset on
    /// `k >= 2` vertices has at most `2k - 3` edges.
    fn laman_rank(g: &Graph) -> usize {
        let m = g.m();
        let es = g.edges();
        let sparse = |mask: u32| {
            let mut sub = mask;
            loop {
                if sub != 0 {
                    let mut vs = 0u32;
                    let mut cnt = 0;
                    for (i, &(a, b)) in es.iter().enumerate() {
                        if sub >> i & 1 == 1 {
                            vs |= 1 << a | 1 << b;
                            cnt += 1;
                        }
                    }
                    if cnt > 2 * vs.count_ones() as usize - 3 {
                        return false;
                    }
                }
                if sub == 0 {
                    return true;
                }
                sub = (sub - 1) & mask;
            }
        };
        (0u32..1 << m).filter(|&mask| sparse(mask)).map(|mask| mask.count_ones() as usize).max().unwrap_or(0)
    }

    #[test]
    fn named_ranks() {
        assert_eq!(generic_rank(&complete(3)), 3);
        assert_eq!(generic_rank(&cycle(4)), 4);
        assert_eq!(laman_rank(&cycle(4)), 4);
        assert_eq!(generic_rank(&complete_bipartite(3, 3)), 9);
        assert!(is_minimally_rigid(&complete_bipartite(3, 3)));
        assert!(is_rigid(&complete(1)) && is_rigid(&complete(2)));
        assert_eq!(generic_rank(&complete(2)), 1);
        assert!(!is_rigid(&cycle(4)));
    }

    #[test]
    fn pebble_rank_matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = rng.gen_range(2..=6);
            let es: Vec<Edge> =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(0.55)).collect();
            let g = Graph::new(n, es).unwrap();
            assert_eq!(generic_rank(&g), laman_rank(&g), "{g:?}");
        }
    }

    #[test]
    fn redundancy_of_named_graphs() {
        let k4 = redundancy(&complete(4));
        assert_eq!(k4.redundant_edges.len(), 6);
        assert_eq!(k4.components, vec![complete(4).sorted_edges()]);
        assert!(k4.trivial_components.is_empty());

        // K4 on {0,1,2,3} plus a triangle on {2,3,4}.
        let g = Graph::new(5, complete(4).edges().iter().copied().chain([(2, 4), (3, 4)])).unwrap();
        let r = redundancy(&g);
        assert_eq!(r.components, vec![complete(4).sorted_edges()]);
        assert_eq!(r.trivial_components, vec![(2, 4), (3, 4)]);

        let prism = redundancy(&prism());
        assert!(prism.redundant_edges.is_empty());
        assert!(prism.components.is_empty());
        assert_eq!(prism.rank, 9);
    }

    #[test]
    fn triangle_of_bodies_is_one_component() {
        // Three K4s pairwise sharing one vertex: rigid, redundantly rigid,
        // yet three separate matroid-connected blocks.
        let mut g = Graph::empty(9);
        for quad in [[0, 3, 4, 1], [1, 5, 6, 2], [2, 7, 8, 0]] {
            for i in 0..4 {
                for j in i + 1..4 {
                    g.add_edge(quad[i], quad[j]).unwrap();
                }
            }
        }
        assert!(is_rigid(&g));
        let r = redundancy(&g);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].len(), 18);
        assert!(is_redundantly_rigid(&g));
    }

    #[test]
    fn global_rigidity() {
        assert!(is_globally_rigid(&complete(4)));
        assert!(!is_globally_rigid(&k4_minus_edge()));
        assert!(is_globally_rigid(&complete_bipartite(3, 4)));
        assert!(!is_globally_rigid(&complete_bipartite(3, 3)));
        assert!(!is_globally_rigid(&prism()));
        assert!(is_globally_rigid(&complete(3)));
        assert!(is_globally_rigid(&complete(2)));
        assert!(!is_globally_rigid(&path(3)));
        for n in 4..=9 {
            assert!(is_globally_rigid(&wheel(n)));
        }
    }

    #[test]
    fn rigid_components_of_hinged_pair() {
        // Two triangles sharing vertex 2: two rigid components.
        let g = Graph::new(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert_eq!(rigid_components(&g).len(), 2);
        assert_eq!(rigid_components(&complete(5)).len(), 1);
    }
}
