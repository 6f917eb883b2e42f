use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{EdgeLengths, Placement, RealizationError};
use crate::graph::{edge, Edge, Graph, Vertex};

/// Base edge plus vertex additions `(new, a, b)`, each joining a new vertex
/// to two placed ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructionOrder {
    pub base_edge: (Vertex, Vertex),
    pub steps: Vec<(Vertex, Vertex, Vertex)>,
}

impl ConstructionOrder {
    pub fn edges(&self) -> Vec<Edge> {
        let mut es = vec![edge(self.base_edge.0, self.base_edge.1)];
        for &(v, a, b) in &self.steps {
            es.push(edge(v, a));
            es.push(edge(v, b));
        }
        es.sort_unstable();
        es
    }

    /// Checks that the additions are well-formed and rebuild exactly `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), RealizationError> {
        let bad = |why: String| Err(RealizationError::InvalidOrder(why));
        let (v1, v2) = self.base_edge;
        if v1 == v2 || v1.max(v2) >= g.n() {
            return bad(format!("base edge {:?} is not an edge on the vertex set", self.base_edge));
        }
        let mut placed = vec![false; g.n()];
        placed[v1] = true;
        placed[v2] = true;
        for &(v, a, b) in &self.steps {
            if v >= g.n() || placed[v] {
                return bad(format!("vertex {v} is out of range or added twice"));
            }
            if a == b || a >= g.n() || b >= g.n() || !placed[a] || !placed[b] {
                return bad(format!("neighbors {a}, {b} of {v} are not two distinct placed vertices"));
            }
            placed[v] = true;
        }
        if placed.iter().any(|&p| !p) {
            return bad("some vertex is never placed".into());
        }
        if self.edges() != g.sorted_edges() {
            return bad("the additions do not produce the edges of the graph".into());
        }
        Ok(())
    }
}

/// One sign per step plus one for the base; `true` is the `+` branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchVector(pub Vec<bool>);

impl BranchVector {
    pub fn all_plus(len: usize) -> BranchVector {
        BranchVector(vec![true; len])
    }
}

/// Parses `+`/`1` and `-`/`0` characters.
pub fn parse_branches(s: &str) -> Result<BranchVector, String> {
    s.trim()
        .chars()
        .map(|c| match c {
            '+' | '1' => Ok(true),
            '-' | '0' => Ok(false),
            other => Err(format!("branch character {other:?} is not one of + - 1 0")),
        })
        .collect::<Result<Vec<bool>, String>>()
        .map(BranchVector)
}

/// Repeatedly deletes the lowest-numbered vertex of degree two until a
/// single edge remains; the deletions in reverse form the order.
pub fn henneberg_order(g: &Graph) -> Option<ConstructionOrder> {
    let n = g.n();
    if n < 2 || g.m() + 3 != 2 * n {
        return None;
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut steps = Vec::with_capacity(n - 2);
    for _ in 0..n - 2 {
        let v = (0..n).find(|&v| alive[v] && degree[v] == 2)?;
        let nb: Vec<Vertex> = g.neighbors(v).iter().copied().filter(|&w| alive[w]).collect();
        alive[v] = false;
        for &w in &nb {
            degree[w] -= 1;
        }
        steps.push((v, nb[0], nb[1]));
    }
    let rest: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
    if !g.has_edge(rest[0], rest[1]) {
        return None;
    }
    steps.reverse();
    Some(ConstructionOrder { base_edge: (rest[0], rest[1]), steps })
}

/// Intersection of the circles of squared radii `ra2` about `pa` and `rb2`
/// about `pb`. With `e = pb - pa` the point is `pa + t e + s (e_y, -e_x)`,
/// where `t` is rational in the data and `s` is its only square root; `plus`
/// picks the sign of `s`.
pub(super) fn circle_step(pa: [f64; 2], pb: [f64; 2], ra2: f64, rb2: f64, plus: bool) -> Result<[f64; 2], StepFailure> {
    let e = [pb[0] - pa[0], pb[1] - pa[1]];
    let l2 = e[0] * e[0] + e[1] * e[1];
    if l2 == 0.0 {
        return Err(StepFailure::Degenerate);
    }
    let t = (ra2 - rb2 + l2) / (2.0 * l2);
    let s2 = ra2 / l2 - t * t;
    let s = if s2 >= 0.0 {
        s2.sqrt()
    } else if s2 >= -1e-12 * (ra2 / l2 + t * t) {
        0.0
    } else {
        return Err(StepFailure::Negative);
    };
    let s = if plus { s } else { -s };
    Ok([pa[0] + t * e[0] + s * e[1], pa[1] + t * e[1] - s * e[0]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum StepFailure {
    Degenerate,
    Negative,
}

fn length(lens: &HashMap<Edge, f64>, a: Vertex, b: Vertex) -> f64 {
    lens[&edge(a, b)]
}

fn place(
    n: usize,
    order: &ConstructionOrder,
    lens: &HashMap<Edge, f64>,
    branch: impl Fn(usize) -> bool,
) -> Result<Vec<[f64; 2]>, RealizationError> {
    let (v1, v2) = order.base_edge;
    let d12 = length(lens, v1, v2);
    if d12 <= 0.0 {
        return Err(RealizationError::Coincident(v1, v2));
    }
    let mut pos = vec![[f64::NAN; 2]; n];
    pos[v1] = [0.0, 0.0];
    pos[v2] = [0.0, if branch(0) { d12.sqrt() } else { -d12.sqrt() }];
    for (i, &(v, a, b)) in order.steps.iter().enumerate() {
        pos[v] = circle_step(pos[a], pos[b], length(lens, v, a), length(lens, v, b), branch(i + 1)).map_err(|f| match f {
            StepFailure::Degenerate => RealizationError::DegenerateStep(v),
            StepFailure::Negative => RealizationError::NegativeDiscriminant(v),
        })?;
    }
    Ok(pos)
}

/// Places the base edge at `(0,0)`, `(0, ±sqrt(d))` and each added vertex by
/// one circle intersection, following `branches`.
pub fn quadratic_realize(
    g: &Graph,
    d: &EdgeLengths,
    order: &ConstructionOrder,
    branches: &BranchVector,
) -> Result<Placement, RealizationError> {
    order.validate(g)?;
    let lens = d.aligned_to(g)?.to_map();
    let expected = order.steps.len() + 1;
    if branches.0.len() != expected {
        return Err(RealizationError::BranchLength { expected, got: branches.0.len() });
    }
    place(g.n(), order, &lens, |i| branches.0[i]).map(Placement::new)
}

pub type BranchOutcome = (BranchVector, Result<Placement, RealizationError>);

/// Every branch vector with its outcome; index bit `i` set means branch `i`
/// is `-`, so the all-plus vector comes first.
pub fn realize_all_branches(
    g: &Graph,
    d: &EdgeLengths,
    order: &ConstructionOrder,
) -> Result<Vec<BranchOutcome>, RealizationError> {
    order.validate(g)?;
    let lens = d.aligned_to(g)?.to_map();
    let k = order.steps.len() + 1;
    Ok((0u64..1 << k)
        .map(|mask| {
            let bv = BranchVector((0..k).map(|i| mask >> i & 1 == 0).collect());
            let out = place(g.n(), order, &lens, |i| bv.0[i]).map(Placement::new);
            (bv, out)
        })
        .collect())
}

/// A spanning construction of `g` by vertex additions: from a base edge,
/// repeatedly add the lowest-numbered vertex with two placed neighbors,
/// joined to the two lowest of them. Edges of `g` outside the order are
/// left as checks. Each edge of `g` is tried as the base in turn.
pub fn trilateration_order(g: &Graph) -> Option<ConstructionOrder> {
    let n = g.n();
    g.edges().iter().find_map(|&(v1, v2)| {
        let mut placed = vec![false; n];
        placed[v1] = true;
        placed[v2] = true;
        let mut steps = Vec::with_capacity(n.saturating_sub(2));
        while steps.len() + 2 < n {
            let (v, a, b) = (0..n).filter(|&v| !placed[v]).find_map(|v| {
                let mut nb = g.neighbors(v).iter().copied().filter(|&w| placed[w]).collect::<Vec<_>>();
                nb.sort_unstable();
                (nb.len() >= 2).then(|| (v, nb[0], nb[1]))
            })?;
            placed[v] = true;
            steps.push((v, a, b));
        }
        Some(ConstructionOrder { base_edge: (v1, v2), steps })
    })
}

/// Largest number of partial placements visited by `real_branches`.
const NODE_BUDGET: usize = 1 << 16;

/// Real placements reachable with the base sign `+`, searched depth first
/// with `+` tried before `-` at every step, at most `limit` of them. Every
/// edge in `lens` between placed vertices that the order does not use must
/// hold to within a relative `1e-6`, which prunes the search. Positions are
/// indexed by vertex; vertices outside the order stay NaN.
pub(super) fn real_branches(
    n: usize,
    order: &ConstructionOrder,
    lens: &HashMap<Edge, f64>,
    limit: usize,
) -> Vec<Vec<[f64; 2]>> {
    let (v1, v2) = order.base_edge;
    let d12 = length(lens, v1, v2);
    if d12 <= 0.0 {
        return Vec::new();
    }
    let used = order.edges();
    let mut checks: Vec<Vec<(Vertex, f64)>> = vec![Vec::new(); n];
    let mut rank = vec![usize::MAX; n];
    rank[v1] = 0;
    rank[v2] = 0;
    for (i, &(v, _, _)) in order.steps.iter().enumerate() {
        rank[v] = i + 1;
    }
    for (&(a, b), &d) in lens {
        if used.binary_search(&(a, b)).is_err() && rank[a] != usize::MAX && rank[b] != usize::MAX {
            let (late, early) = if rank[a] >= rank[b] { (a, b) } else { (b, a) };
            checks[late].push((early, d));
        }
    }
    let floor = lens.values().copied().fold(0.0, f64::max) * 1e-12;
    let mut search = Search { order, lens, checks, floor, limit, nodes: 0, out: Vec::new() };
    let mut pos = vec![[f64::NAN; 2]; n];
    pos[v1] = [0.0, 0.0];
    pos[v2] = [0.0, d12.sqrt()];
    if search.fits(v2, &pos) {
        search.dfs(0, &mut pos);
    }
    search.out
}

struct Search<'a> {
    order: &'a ConstructionOrder,
    lens: &'a HashMap<Edge, f64>,
    checks: Vec<Vec<(Vertex, f64)>>,
    floor: f64,
    limit: usize,
    nodes: usize,
    out: Vec<Vec<[f64; 2]>>,
}

impl Search<'_> {
    fn fits(&self, v: Vertex, pos: &[[f64; 2]]) -> bool {
        self.checks[v].iter().all(|&(w, d)| (super::sq_dist(pos[v], pos[w]) - d).abs() <= 1e-6 * d.max(self.floor))
    }

    fn dfs(&mut self, i: usize, pos: &mut Vec<[f64; 2]>) {
        self.nodes += 1;
        if self.out.len() >= self.limit || self.nodes > NODE_BUDGET {
            return;
        }
        let Some(&(v, a, b)) = self.order.steps.get(i) else {
            self.out.push(pos.clone());
            return;
        };
        let (ra2, rb2) = (length(self.lens, v, a), length(self.lens, v, b));
        let mut seen: Option<[f64; 2]> = None;
        for plus in [true, false] {
            let Ok(p) = circle_step(pos[a], pos[b], ra2, rb2, plus) else { continue };
            // A tangent step gives the same point on both branches.
            if seen == Some(p) {
                continue;
            }
            seen = Some(p);
            pos[v] = p;
            if self.fits(v, pos) {
                self.dfs(i + 1, pos);
            }
        }
        pos[v] = [f64::NAN; 2];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::realization::{measure_lengths, random_generic_placement};

    fn lengths_345() -> EdgeLengths {
        EdgeLengths::new(vec![(0, 1), (0, 2), (1, 2)], vec![25.0, 9.0, 16.0]).unwrap()
    }

    #[test]
    fn orders_of_named_graphs() {
        let k3 = henneberg_order(&complete(3)).unwrap();
        assert_eq!(k3, ConstructionOrder { base_edge: (1, 2), steps: vec![(0, 1, 2)] });
        let w = henneberg_order(&wheel_minus_rim_edge(5)).unwrap();
        assert_eq!(w.steps.len(), 3);
        w.validate(&wheel_minus_rim_edge(5)).unwrap();
        assert_eq!(henneberg_order(&complete_bipartite(3, 3)), None);
        assert_eq!(henneberg_order(&complete(4)), None);
        assert_eq!(henneberg_order(&complete(1)), None);
        assert!(henneberg_order(&complete(2)).unwrap().steps.is_empty());
    }

    #[test]
    fn triangle_by_hand() {
        let order = ConstructionOrder { base_edge: (0, 1), steps: vec![(2, 0, 1)] };
        let g = complete(3);
        let p = quadratic_realize(&g, &lengths_345(), &order, &BranchVector(vec![true, true])).unwrap();
        let want = [[0.0, 0.0], [0.0, 5.0], [2.4, 1.8]];
        for (got, want) in p.coords.iter().zip(want) {
            assert!((got[0] - want[0]).abs() < 1e-12 && (got[1] - want[1]).abs() < 1e-12, "{p:?}");
        }
        let q = quadratic_realize(&g, &lengths_345(), &order, &BranchVector(vec![true, false])).unwrap();
        assert!((q.coords[2][0] + 2.4).abs() < 1e-12 && (q.coords[2][1] - 1.8).abs() < 1e-12);
        let r = quadratic_realize(&g, &lengths_345(), &order, &BranchVector(vec![false, true])).unwrap();
        assert_eq!(r.coords[1], [0.0, -5.0]);
        assert!(matches!(
            quadratic_realize(&g, &lengths_345(), &order, &BranchVector(vec![true])),
            Err(RealizationError::BranchLength { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn infeasible_triangle_has_negative_discriminant() {
        let order = ConstructionOrder { base_edge: (0, 1), steps: vec![(2, 0, 1)] };
        let d = EdgeLengths::new(vec![(0, 1), (0, 2), (1, 2)], vec![1.0, 1.0, 100.0]).unwrap();
        let out = quadratic_realize(&complete(3), &d, &order, &BranchVector::all_plus(2));
        assert_eq!(out, Err(RealizationError::NegativeDiscriminant(2)));
    }

    #[test]
    fn all_branches_are_equivalent() {
        let g = wheel_minus_rim_edge(6);
        let order = henneberg_order(&g).unwrap();
        let d = measure_lengths(&g, &random_generic_placement(&g, 11).to_float()).unwrap();
        let outs = realize_all_branches(&g, &d, &order).unwrap();
        assert_eq!(outs.len(), 1 << (order.steps.len() + 1));
        let mut real = 0;
        for (_, out) in &outs {
            if let Ok(p) = out {
                real += 1;
                assert!(d.max_relative_residual(&measure_lengths(&g, p).unwrap()) < 1e-9);
            }
        }
        assert!(real >= 4);
    }

    #[test]
    fn rejects_bad_orders() {
        let g = complete(3);
        let bad = ConstructionOrder { base_edge: (0, 1), steps: vec![(2, 0, 0)] };
        assert!(bad.validate(&g).is_err());
        let wrong_graph = ConstructionOrder { base_edge: (0, 1), steps: vec![(2, 0, 1)] };
        assert!(wrong_graph.validate(&path(3)).is_err());
    }

    #[test]
    fn parses_branch_strings() {
        assert_eq!(parse_branches("+-10").unwrap(), BranchVector(vec![true, false, true, false]));
        assert!(parse_branches("+x").is_err());
    }

    #[test]
    fn trilateration_orders() {
        for n in 4..10 {
            let g = wheel(n);
            let order = trilateration_order(&g).unwrap();
            assert_eq!(order.steps.len(), n - 2);
            assert!(order.edges().iter().all(|&(a, b)| g.has_edge(a, b)));
        }
        assert_eq!(trilateration_order(&complete_bipartite(3, 3)), None);
        assert_eq!(trilateration_order(&complete_bipartite(3, 4)), None);
        assert!(trilateration_order(&prism()).is_none());
    }

    #[test]
    fn extra_edges_prune_the_branches() {
        let g = wheel(8);
        let p = random_generic_placement(&g, 4).to_float();
        let d = measure_lengths(&g, &p).unwrap();
        let order = trilateration_order(&g).unwrap();
        let found = real_branches(g.n(), &order, &d.to_map(), 64);
        assert!(!found.is_empty() && found.len() < 1 << (g.n() - 2));
        for c in found {
            let q = Placement::new(c);
            assert!(d.max_relative_residual(&measure_lengths(&g, &q).unwrap()) < 1e-6);
        }
    }
}
