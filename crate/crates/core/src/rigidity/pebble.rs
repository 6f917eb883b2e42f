use crate::graph::{edge, Edge, Vertex};

/// The (2,3)-pebble game.
///
/// Every vertex starts with two pebbles. An edge `uv` is independent of the
/// accepted set exactly when four pebbles can be gathered on `u` and `v`;
/// accepting it spends one pebble and orients the edge out of `u`. At all
/// times `pebbles(v) + outdegree(v) == 2`.
#[derive(Debug, Clone)]
pub struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<Vertex>>,
    accepted: Vec<Edge>,
}

impl PebbleGame {
    pub fn new(n: usize) -> Self {
        PebbleGame { pebbles: vec![2; n], out: vec![Vec::new(); n], accepted: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.accepted.len()
    }

    pub fn accepted(&self) -> &[Edge] {
        &self.accepted
    }

    pub fn pebbles(&self, v: Vertex) -> u8 {
        self.pebbles[v]
    }

    pub fn outdegree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    /// Directed accepted edges as `(tail, head)`.
    pub fn orientation(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out.iter().enumerate().flat_map(|(t, hs)| hs.iter().map(move |&h| (t, h)))
    }

    /// Whether `uv` would be independent of the accepted edges. Pebbles may
    /// move, but the accepted set is unchanged.
    pub fn is_independent(&mut self, u: Vertex, v: Vertex) -> bool {
        u != v && self.gather(u, v)
    }

    /// Tries to accept `uv`; returns whether it was independent.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.is_independent(u, v) {
            return false;
        }
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        self.accepted.push(edge(u, v));
        true
    }

    fn gather(&mut self, u: Vertex, v: Vertex) -> bool {
        while self.pebbles[u] < 2 {
            if !self.fetch_pebble(u, v) {
                return false;
            }
        }
        while self.pebbles[v] < 2 {
            if !self.fetch_pebble(v, u) {
                return false;
            }
        }
        true
    }

    /// Depth-first search from `root` along out-edges for a free pebble,
    /// never entering `blocked`; on success the path is reversed and the
    /// pebble moves to `root`.
    fn fetch_pebble(&mut self, root: Vertex, blocked: Vertex) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        parent[blocked] = blocked;
        let mut stack = vec![root];
        let mut found = None;
        'search: while let Some(x) = stack.pop() {
            for &y in &self.out[x] {
                if parent[y] != usize::MAX {
                    continue;
                }
                parent[y] = x;
                if self.pebbles[y] > 0 {
                    found = Some(y);
                    break 'search;
                }
                stack.push(y);
            }
        }
        let Some(target) = found else {
            return false;
        };
        let mut y = target;
        while y != root {
            let x = parent[y];
            let pos = self.out[x].iter().position(|&h| h == y).expect("path edge exists");
            self.out[x].swap_remove(pos);
            self.out[y].push(x);
            y = x;
        }
        self.pebbles[target] -= 1;
        self.pebbles[root] += 1;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_then_dependent_edge() {
        let mut pg = PebbleGame::new(4);
        assert!(pg.add_edge(0, 1));
        assert!(pg.add_edge(1, 2));
        assert!(pg.add_edge(0, 2));
        assert!(!pg.is_independent(0, 1));
        assert!(pg.add_edge(0, 3));
        assert!(pg.add_edge(1, 3));
        assert!(!pg.add_edge(2, 3));
        assert_eq!(pg.rank(), 5);
        for v in 0..4 {
            assert_eq!(pg.pebbles(v) as usize + pg.outdegree(v), 2);
        }
    }
}
