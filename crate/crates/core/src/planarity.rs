//! Planarity testing with a combinatorial embedding.
//!
//! Each biconnected block is embedded with the Demoucron–Malgrange–Pertuiset
//! path-addition method (quadratic, which is plenty at the sizes this crate
//! targets); block rotations are then concatenated at cut vertices.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::connectivity::{biconnected_blocks, components};
use crate::graph::{edge, Edge, Graph, Piece, Vertex};

/// Cyclic order of neighbours around every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    rotation: Vec<Vec<Vertex>>,
}

impl RotationSystem {
    pub fn rotation(&self, v: Vertex) -> &[Vertex] {
        &self.rotation[v]
    }

    fn successor(&self, at: Vertex, from: Vertex) -> Vertex {
        let r = &self.rotation[at];
        let i = r.iter().position(|&x| x == from).expect("dart belongs to rotation");
        r[(i + 1) % r.len()]
    }

    /// Faces as closed dart walks; the face after dart `(x, y)` continues
    /// with `(y, succ_y(x))`.
    pub fn faces(&self) -> Vec<Vec<(Vertex, Vertex)>> {
        let mut seen: HashSet<(Vertex, Vertex)> = HashSet::new();
        let mut faces = Vec::new();
        for x in 0..self.rotation.len() {
            for &y in &self.rotation[x] {
                if seen.contains(&(x, y)) {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (x, y);
                while seen.insert((a, b)) {
                    face.push((a, b));
                    let c = self.successor(b, a);
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checks that the rotation matches `g` and that every connected
    /// component satisfies `n - m + f = 2`.
    pub fn is_planar_embedding_of(&self, g: &Graph) -> bool {
        if self.rotation.len() != g.n() {
            return false;
        }
        for v in 0..g.n() {
            let mut r = self.rotation[v].clone();
            r.sort_unstable();
            if r != g.neighbors(v) {
                return false;
            }
        }
        let comps = components(g);
        let mut comp_of = vec![0; g.n()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        let mut faces_per = vec![0usize; comps.len()];
        for f in self.faces() {
            faces_per[comp_of[f[0].0]] += 1;
        }
        comps.iter().enumerate().all(|(i, c)| {
            let m = c.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
            let f = if m == 0 { 1 } else { faces_per[i] };
            c.len() + f == m + 2
        })
    }

    /// Embedding induced on the subgraph keeping only edges accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(Edge) -> bool) -> RotationSystem {
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(v, r)| r.iter().copied().filter(|&w| keep(edge(v, w))).collect())
            .collect();
        RotationSystem { rotation }
    }
}

pub fn is_planar(g: &Graph) -> bool {
    planar_embedding(g).is_some()
}

/// Planarity verdict together with an embedding when one exists.
pub fn is_planar_with_embedding(g: &Graph) -> (bool, Option<RotationSystem>) {
    let emb = planar_embedding(g);
    (emb.is_some(), emb)
}

pub fn planar_embedding(g: &Graph) -> Option<RotationSystem> {
    if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
        return None;
    }
    let mut rotation: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for block in biconnected_blocks(g) {
        if block.len() == 1 {
            let (a, b) = block[0];
            rotation[a].push(b);
            rotation[b].push(a);
            continue;
        }
        let piece = Piece::from_host_edges(&block, &[]);
        let local = embed_biconnected(&piece.graph)?;
        for (lv, r) in local.into_iter().enumerate() {
            rotation[piece.origin[lv]].extend(r.into_iter().map(|w| piece.origin[w]));
        }
    }
    let rs = RotationSystem { rotation };
    debug_assert!(rs.is_planar_embedding_of(g));
    Some(rs)
}

enum Fragment {
    Chord(Vertex, Vertex),
    Bridge { interior: Vec<Vertex>, attachments: Vec<Vertex> },
}

impl Fragment {
    fn attachments(&self) -> Vec<Vertex> {
        match self {
            Fragment::Chord(a, b) => vec![*a, *b],
            Fragment::Bridge { attachments, .. } => attachments.clone(),
        }
    }
}

/// Rotation lists for a 2-connected graph with at least three vertices.
fn embed_biconnected(h: &Graph) -> Option<Vec<Vec<Vertex>>> {
    let n = h.n();
    let mut on = vec![false; n];
    let mut placed: HashSet<Edge> = HashSet::new();

    let (a, b) = h.edges()[0];
    let path = bfs_path(h, b, a, |x, y| edge(x, y) != (a, b), |_| true)?;
    // `path` runs b .. a; the cycle is a, b, ..., back to a.
    let mut cycle = vec![a];
    cycle.extend(path.iter().copied().take(path.len() - 1));
    for w in cycle.windows(2) {
        placed.insert(edge(w[0], w[1]));
    }
    placed.insert(edge(*cycle.last().unwrap(), cycle[0]));
    for &v in &cycle {
        on[v] = true;
    }
    let mut rev = cycle.clone();
    rev.reverse();
    let mut faces: Vec<Vec<Vertex>> = vec![cycle, rev];

    while placed.len() < h.m() {
        let frags = fragments(h, &on, &placed);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let att = frag.attachments();
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| att.iter().all(|x| f.contains(x)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("some fragment remains");
        let path = match &frags[fi] {
            Fragment::Chord(x, y) => vec![*x, *y],
            Fragment::Bridge { interior, attachments } => {
                let inside: HashSet<Vertex> = interior.iter().copied().collect();
                let s = attachments[0];
                let t = attachments[1];
                // Leave `s` only into the bridge interior, never along a chord.
                bfs_path(h, s, t, |x, y| x != s || inside.contains(&y), |v| inside.contains(&v) || v == t)?
            }
        };
        for w in path.windows(2) {
            placed.insert(edge(w[0], w[1]));
        }
        for &v in &path {
            on[v] = true;
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }

    let mut succ: Vec<HashMap<Vertex, Vertex>> = vec![HashMap::new(); n];
    for f in &faces {
        let k = f.len();
        for i in 0..k {
            let (x, y, z) = (f[i], f[(i + 1) % k], f[(i + 2) % k]);
            succ[y].insert(x, z);
        }
    }
    let mut rotation = Vec::with_capacity(n);
    for (v, next) in succ.iter().enumerate() {
        let nb = h.neighbors(v);
        let mut r = vec![nb[0]];
        let mut cur = nb[0];
        for _ in 1..nb.len() {
            cur = *next.get(&cur)?;
            r.push(cur);
        }
        if next.get(&cur) != Some(&nb[0]) {
            return None;
        }
        rotation.push(r);
    }
    Some(rotation)
}

fn fragments(h: &Graph, on: &[bool], placed: &HashSet<Edge>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &(a, b) in h.edges() {
        if on[a] && on[b] && !placed.contains(&(a, b)) {
            out.push(Fragment::Chord(a, b));
        }
    }
    let mut seen = on.to_vec();
    for s in 0..h.n() {
        if seen[s] {
            continue;
        }
        let mut interior = vec![s];
        let mut attachments = Vec::new();
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in h.neighbors(x) {
                if on[y] {
                    attachments.push(y);
                } else if !seen[y] {
                    seen[y] = true;
                    interior.push(y);
                    stack.push(y);
                }
            }
        }
        attachments.sort_unstable();
        attachments.dedup();
        out.push(Fragment::Bridge { interior, attachments });
    }
    out
}

/// Shortest path from `s` to `t` using edges accepted by `use_edge` and
/// stepping only onto vertices accepted by `enter`.
fn bfs_path(
    h: &Graph,
    s: Vertex,
    t: Vertex,
    use_edge: impl Fn(Vertex, Vertex) -> bool,
    enter: impl Fn(Vertex) -> bool,
) -> Option<Vec<Vertex>> {
    let mut prev = vec![usize::MAX; h.n()];
    prev[s] = s;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in h.neighbors(x) {
            if prev[y] != usize::MAX || !use_edge(x, y) || !enter(y) {
                continue;
            }
            prev[y] = x;
            if y == t {
                let mut p = vec![t];
                let mut c = t;
                while c != s {
                    c = prev[c];
                    p.push(c);
                }
                p.reverse();
                return Some(p);
            }
            q.push_back(y);
        }
    }
    None
}

/// Splits an oriented face cycle by a path whose endpoints lie on it.
fn split_face(face: &[Vertex], path: &[Vertex]) -> (Vec<Vertex>, Vec<Vertex>) {
    let k = face.len();
    let s = *path.first().unwrap();
    let t = *path.last().unwrap();
    let i = face.iter().position(|&x| x == s).unwrap();
    let j = face.iter().position(|&x| x == t).unwrap();
    let interior = &path[1..path.len() - 1];

    let mut f1 = Vec::new();
    let mut p = i;
    loop {
        f1.push(face[p]);
        if p == j {
            break;
        }
        p = (p + 1) % k;
    }
    f1.extend(interior.iter().rev());

    let mut f2 = Vec::new();
    let mut p = j;
    loop {
        f2.push(face[p]);
        if p == i {
            break;
        }
        p = (p + 1) % k;
    }
    f2.extend(interior.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn check(g: &Graph) -> bool {
        match planar_embedding(g) {
            Some(rs) => {
                assert!(rs.is_planar_embedding_of(g), "bad embedding for {g:?}");
                true
            }
            None => false,
        }
    }

    #[test]
    fn kuratowski_graphs() {
        assert!(check(&complete(4)));
        assert!(!check(&complete(5)));
        assert!(!check(&complete_bipartite(3, 3)));
        assert!(check(&prism()));
        assert!(check(&wheel(8)));
        assert!(check(&complete_bipartite(2, 5)));
    }

    fn subdivide(g: &Graph, times: usize) -> Graph {
        let mut h = Graph::empty(g.n());
        for &(a, b) in g.edges() {
            let mut prev = a;
            for _ in 0..times {
                let x = h.add_vertex();
                h.add_edge(prev, x).unwrap();
                prev = x;
            }
            h.add_edge(prev, b).unwrap();
        }
        h
    }

    #[test]
    fn subdivided_kuratowski_graphs_are_not_planar() {
        for t in 1..=2 {
            assert!(!check(&subdivide(&complete(5), t)));
            assert!(!check(&subdivide(&complete_bipartite(3, 3), t)));
        }
        assert!(check(&subdivide(&complete(4), 2)));
    }

    #[test]
    fn disconnected_and_tiny_graphs() {
        assert!(check(&Graph::empty(0)));
        assert!(check(&Graph::empty(3)));
        assert!(check(&path(5)));
        let two_k4 = Graph::new(8, complete(4).edges().iter().flat_map(|&(a, b)| [(a, b), (a + 4, b + 4)])).unwrap();
        assert!(check(&two_k4));
    }

    #[test]
    fn cut_vertex_gluing_stays_planar() {
        // Two K4 sharing vertex 0, plus a pendant path.
        let mut es: Vec<Edge> = complete(4).edges().to_vec();
        es.extend([(0, 4), (0, 5), (0, 6), (4, 5), (4, 6), (5, 6), (6, 7)]);
        assert!(check(&Graph::new(8, es).unwrap()));
    }

    #[test]
    fn agrees_with_edge_count_and_minors_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let n = rng.gen_range(3..=9);
            let p = rng.gen_range(0.2..0.8);
            let es: Vec<Edge> =
                (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
            let g = Graph::new(n, es).unwrap();
            let planar = check(&g);
            if planar {
                assert!(g.m() <= 3 * n - 6);
            }
            if g.m() > 3 * n - 6 {
                assert!(!planar);
            }
        }
    }
}
