//! Vertex connectivity, cut vertices, biconnected blocks and 2-separations.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{edge, Edge, Graph, Vertex};

/// Connected components of `g` restricted to vertices with `removed[v] == false`.
/// Components are listed by their smallest vertex; each is sorted.
pub fn components_avoiding(g: &Graph, removed: &[bool]) -> Vec<Vec<Vertex>> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut out: Vec<Vec<Vertex>> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if removed[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        stack.push(s);
        while let Some(x) = stack.pop() {
            for &y in g.neighbors(x) {
                if !removed[y] && comp[y] == usize::MAX {
                    comp[y] = id;
                    members.push(y);
                    stack.push(y);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

pub fn components(g: &Graph) -> Vec<Vec<Vertex>> {
    components_avoiding(g, &vec![false; g.n()])
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || components(g).len() == 1
}

fn connected_avoiding(g: &Graph, removed: &[bool]) -> bool {
    components_avoiding(g, removed).len() <= 1
}

/// `G` is k-connected when it has at least `k + 1` vertices and deleting any
/// fewer than `k` vertices leaves it connected.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if n < k + 1 {
        return false;
    }
    if k == 0 {
        return true;
    }
    if !is_connected(g) {
        return false;
    }
    let mut removed = vec![false; n];
    match k {
        1 => true,
        2 => (0..n).all(|v| {
            removed[v] = true;
            let ok = connected_avoiding(g, &removed);
            removed[v] = false;
            ok
        }),
        3 => {
            for a in 0..n {
                removed[a] = true;
                if !connected_avoiding(g, &removed) {
                    return false;
                }
                for b in a + 1..n {
                    removed[b] = true;
                    let ok = connected_avoiding(g, &removed);
                    removed[b] = false;
                    if !ok {
                        return false;
                    }
                }
                removed[a] = false;
            }
            true
        }
        _ => panic!("is_k_connected supports k <= 3, got {k}"),
    }
}

/// Largest `k <= 3` for which `g` is k-connected.
pub fn connectivity(g: &Graph) -> usize {
    (1..=3).take_while(|&k| is_k_connected(g, k)).last().unwrap_or(0)
}

/// Edge sets of the biconnected blocks (bridges are single-edge blocks).
pub fn biconnected_blocks(g: &Graph) -> Vec<Vec<Edge>> {
    let n = g.n();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut edge_stack: Vec<Edge> = Vec::new();
    let mut blocks = Vec::new();

    // Iterative DFS: frames hold (vertex, parent, next neighbour position).
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut frames: Vec<(Vertex, Option<Vertex>, usize)> = vec![(root, None, 0)];
        while let Some(&mut (v, parent, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = g.neighbors(v).get(*pos) {
                *pos += 1;
                if Some(w) == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(edge(v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    frames.push((w, Some(v), 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(edge(v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                frames.pop();
                if let Some(p) = parent {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let target = edge(p, v);
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == target {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparationError {
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("vertex {0} is not in the subgraph")]
    MissingVertex(Vertex),
}

/// Vertices `w` (other than `u`, `v`) whose deletion from `h` leaves `u` and
/// `v` in different components. Returned in increasing order.
pub fn separating_cut_vertices(h: &Graph, u: Vertex, v: Vertex) -> Result<Vec<Vertex>, SeparationError> {
    for x in [u, v] {
        if x >= h.n() || (h.degree(x) == 0 && h.n() > 1) {
            return Err(SeparationError::MissingVertex(x));
        }
    }
    let mut removed = vec![false; h.n()];
    let mut out = Vec::new();
    for w in 0..h.n() {
        if w == u || w == v || h.degree(w) == 0 {
            continue;
        }
        removed[w] = true;
        if !reachable(h, u, v, &removed) {
            out.push(w);
        }
        removed[w] = false;
    }
    Ok(out)
}

fn reachable(g: &Graph, from: Vertex, to: Vertex, removed: &[bool]) -> bool {
    let mut seen = removed.to_vec();
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(x) = stack.pop() {
        if x == to {
            return true;
        }
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    false
}

/// A split of the edge set into two sides that share exactly the separator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TwoSeparation {
    pub separator: (Vertex, Vertex),
    pub side1: Vec<Edge>,
    pub side2: Vec<Edge>,
    pub vertex_side1: Vec<Vertex>,
    pub vertex_side2: Vec<Vertex>,
}

impl TwoSeparation {
    /// Whether the separator pair is itself an edge (it then sits in `side1`).
    pub fn separator_is_edge(&self) -> bool {
        self.side1.contains(&self.separator)
    }
}

/// Every 2-separation of a 2-connected graph.
///
/// For each separator `{u, v}` with `u < v`, the components of `G - {u, v}`
/// are grouped into two nonempty sides in every possible way; the component
/// holding the smallest vertex always goes to `side1`, as does the edge `uv`
/// when present. Output is sorted by separator, then by `vertex_side1`.
pub fn enumerate_2_separations(g: &Graph) -> Result<Vec<TwoSeparation>, SeparationError> {
    if !is_k_connected(g, 2) {
        return Err(SeparationError::NotTwoConnected);
    }
    let n = g.n();
    let mut out = Vec::new();
    let mut removed = vec![false; n];
    for u in 0..n {
        for v in u + 1..n {
            removed[u] = true;
            removed[v] = true;
            let comps = components_avoiding(g, &removed);
            removed[u] = false;
            removed[v] = false;
            if comps.len() < 2 {
                continue;
            }
            let mut which = vec![usize::MAX; n];
            for (i, c) in comps.iter().enumerate() {
                for &x in c {
                    which[x] = i;
                }
            }
            let k = comps.len();
            let mut batch = Vec::new();
            // Component 0 is pinned to side 1; the remaining k-1 bits choose.
            for mask in 0..(1usize << (k - 1)) {
                let in_side1 = |c: usize| c == 0 || (mask >> (c - 1)) & 1 == 1;
                if (1..k).all(in_side1) {
                    continue;
                }
                let mut side1 = Vec::new();
                let mut side2 = Vec::new();
                for &e in g.edges() {
                    let (a, b) = e;
                    let c = if a != u && a != v { which[a] } else if b != u && b != v { which[b] } else { usize::MAX };
                    if c == usize::MAX || in_side1(c) {
                        side1.push(e);
                    } else {
                        side2.push(e);
                    }
                }
                let mut vs1 = vec![u, v];
                let mut vs2 = vec![u, v];
                for (c, comp) in comps.iter().enumerate() {
                    if in_side1(c) { vs1.extend(comp) } else { vs2.extend(comp) }
                }
                vs1.sort_unstable();
                vs2.sort_unstable();
                batch.push(TwoSeparation {
                    separator: (u, v),
                    side1,
                    side2,
                    vertex_side1: vs1,
                    vertex_side2: vs2,
                });
            }
            batch.sort_by(|a, b| a.vertex_side1.cmp(&b.vertex_side1));
            out.extend(batch);
        }
    }
    Ok(out)
}
