use std::collections::HashMap;

use super::henneberg::{henneberg_order, real_branches, trilateration_order};
use super::newton::{congruent, newton_candidates, newton_refine};
use super::{measure_lengths, sq_dist, EdgeLengths, Placement, RealizationError};
use crate::connectivity::{enumerate_2_separations, is_k_connected};
use crate::decomposition::to_host;
use crate::graph::{edge, Edge, Graph, Piece, Vertex};
use crate::rigidity::is_rigid;

/// Candidate realizations kept per sub-problem.
const CANDIDATES: usize = 8;
/// Random starts per piece solved numerically.
const RESTARTS: usize = 100;

/// Realizes a rigid graph from squared lengths.
///
/// A piece with a degree-two construction follows it, so a Henneberg graph
/// gets the all-`+` solution first. A piece spanned by a sequence of vertex additions to two placed
/// neighbors is solved by circle intersections, keeping the branches that
/// satisfy its remaining edges. Otherwise it is split at a 2-separation
/// `{u, v}`: when `uv` is an edge both sides are solved independently; when
/// it is not, a rigid side is solved first and its `uv` distance is handed to the other
/// side as an extra edge. Pieces with no split are solved by damped
/// Gauss–Newton from seeded starts. Sides are joined by the rigid motion
/// matching them at `u` and `v` (never a reflection), and the glued result
/// is polished on the whole graph.
pub fn glue_realize(g: &Graph, d: &EdgeLengths, seed: u64) -> Result<Placement, RealizationError> {
    let d = d.aligned_to(g)?;
    if g.n() <= 1 {
        return Ok(Placement::new(vec![[0.0, 0.0]; g.n()]));
    }
    if !is_rigid(g) {
        return Err(RealizationError::NotRigid);
    }
    let mut solver = Solver { n: g.n(), seed, calls: 0 };
    let candidates = solver.solve(&g.sorted_edges(), &d.to_map());
    let mut last = RealizationError::Inconsistent("no piece could be realized".into());
    for c in candidates {
        let p = Placement::new(c);
        let polished = newton_refine(g, &d, &p).unwrap_or(p);
        let residual = d.max_relative_residual(&measure_lengths(g, &polished)?);
        if residual < 1e-7 {
            return Ok(polished);
        }
        last = RealizationError::NotConverged { residual };
    }
    Err(last)
}

type Coords = Vec<[f64; 2]>;

struct Solver {
    n: usize,
    seed: u64,
    calls: u64,
}

impl Solver {
    /// Realizations of the graph spanned by `edges` (host ids), as full-size
    /// coordinate vectors with NaN outside the piece.
    fn solve(&mut self, edges: &[Edge], lens: &HashMap<Edge, f64>) -> Vec<Coords> {
        self.calls += 1;
        let piece = Piece::from_host_edges(edges, &[]);
        let g = &piece.graph;
        let local_lens: HashMap<Edge, f64> = g
            .edges()
            .iter()
            .map(|&(a, b)| ((a, b), lens[&edge(piece.origin[a], piece.origin[b])]))
            .collect();
        let lift = |local: &[[f64; 2]]| {
            let mut c = vec![[f64::NAN; 2]; self.n];
            for (i, &h) in piece.origin.iter().enumerate() {
                c[h] = local[i];
            }
            c
        };

        if let Some(order) = henneberg_order(g).or_else(|| trilateration_order(g)) {
            let found = real_branches(g.n(), &order, &local_lens, CANDIDATES);
            if !found.is_empty() {
                return found.iter().map(|c| lift(c)).collect();
            }
        }
        let seps = if is_k_connected(g, 3) { Vec::new() } else { enumerate_2_separations(g).unwrap_or_default() };
        let Some(sep) = seps.first().map(|s| to_host(s, &piece.origin)) else {
            let d = EdgeLengths { edges: g.edges().to_vec(), d: g.edges().iter().map(|e| local_lens[e]).collect() };
            let seed = self.seed ^ self.calls.wrapping_mul(0x9e37_79b9_7f4a_7c15);
            return newton_candidates(g, &d, seed, 3, RESTARTS)
                .unwrap_or_default()
                .iter()
                .map(|p| lift(&p.coords))
                .collect();
        };

        let (u, v) = sep.separator;
        let uv = edge(u, v);
        let plus_uv = |side: &[Edge]| {
            let mut es = side.to_vec();
            if !es.contains(&uv) {
                es.push(uv);
            }
            es.sort_unstable();
            es
        };
        let mut out = Vec::new();
        if lens.contains_key(&uv) && edges.binary_search(&uv).is_ok() {
            let left = self.solve(&plus_uv(&sep.side1), lens);
            if left.is_empty() {
                return out;
            }
            let right = self.solve(&plus_uv(&sep.side2), lens);
            for a in &left {
                for b in &right {
                    out.push(join(a, b, u, v));
                    if out.len() >= CANDIDATES {
                        return out;
                    }
                }
            }
            return out;
        }

        let rigid1 = is_rigid(&Piece::from_host_edges(&sep.side1, &[]).graph);
        let (first, second) = if rigid1 { (&sep.side1, &sep.side2) } else { (&sep.side2, &sep.side1) };
        let first_sorted = {
            let mut es = first.clone();
            es.sort_unstable();
            es
        };
        for a in self.solve(&first_sorted, lens) {
            let mut lens2 = lens.clone();
            lens2.insert(uv, sq_dist(a[u], a[v]));
            for b in self.solve(&plus_uv(second), &lens2) {
                let joined = join(&a, &b, u, v);
                if !out.iter().any(|c| same(c, &joined)) {
                    out.push(joined);
                }
                if out.len() >= CANDIDATES {
                    return out;
                }
            }
        }
        out
    }
}

/// Moves `b` by the rotation and translation taking `b(u), b(v)` to
/// `a(u), a(v)` and overlays it on `a`.
fn join(a: &Coords, b: &Coords, u: Vertex, v: Vertex) -> Coords {
    let (au, av, bu, bv) = (a[u], a[v], b[u], b[v]);
    let angle = (av[1] - au[1]).atan2(av[0] - au[0]) - (bv[1] - bu[1]).atan2(bv[0] - bu[0]);
    let (s, c) = angle.sin_cos();
    let mut out = a.clone();
    for (i, p) in b.iter().enumerate() {
        if p[0].is_nan() || !out[i][0].is_nan() {
            continue;
        }
        let (x, y) = (p[0] - bu[0], p[1] - bu[1]);
        out[i] = [au[0] + c * x - s * y, au[1] + s * x + c * y];
    }
    out
}

fn same(a: &Coords, b: &Coords) -> bool {
    let keep: Vec<usize> = (0..a.len()).filter(|&i| !a[i][0].is_nan()).collect();
    let pick = |c: &Coords| Placement::new(keep.iter().map(|&i| c[i]).collect());
    congruent(&pick(a), &pick(b), 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::realization::{henneberg_order, quadratic_realize, random_generic_placement, BranchVector};

    fn round_trip(g: &Graph, seed: u64) -> f64 {
        let p = random_generic_placement(g, seed).to_float();
        let d = measure_lengths(g, &p).unwrap();
        let q = glue_realize(g, &d, seed).unwrap();
        d.max_relative_residual(&measure_lengths(g, &q).unwrap())
    }

    #[test]
    fn glued_pair_of_k4_minus_edge() {
        for seed in 0..5 {
            assert!(round_trip(&two_k4_minus_uv(), seed) < 1e-7);
        }
    }

    #[test]
    fn wheels_and_dense_graphs() {
        for n in 4..=8 {
            assert!(round_trip(&wheel(n), n as u64) < 1e-7);
        }
        assert!(round_trip(&complete(5), 1) < 1e-7);
        assert!(round_trip(&complete_bipartite(3, 4), 2) < 1e-7);
        assert!(round_trip(&prism(), 3) < 1e-7);
    }

    #[test]
    fn henneberg_graphs_match_the_quadratic_solution() {
        let mut compared = 0;
        for (i, g) in [wheel_minus_rim_edge(7), k4_minus_edge(), wheel_minus_rim_edge(9)].iter().enumerate() {
            let order = henneberg_order(g).unwrap();
            for seed in 0..10 {
                let p = random_generic_placement(g, seed + 100 * i as u64).to_float();
                let d = measure_lengths(g, &p).unwrap();
                let glued = glue_realize(g, &d, 0).unwrap();
                assert!(d.max_relative_residual(&measure_lengths(g, &glued).unwrap()) < 1e-7);
                // Only comparable when the all-plus branch is real.
                if let Ok(quad) = quadratic_realize(g, &d, &order, &BranchVector::all_plus(order.steps.len() + 1)) {
                    assert!(congruent(&glued, &quad, 1e-8));
                    compared += 1;
                }
            }
        }
        assert!(compared >= 10, "{compared}");
    }

    #[test]
    fn scaling_lengths_scales_the_answer() {
        let g = two_k4_minus_uv();
        let p = random_generic_placement(&g, 8).to_float();
        let d = measure_lengths(&g, &p).unwrap();
        let scaled = EdgeLengths { edges: d.edges.clone(), d: d.d.iter().map(|x| x * 9.0).collect() };
        let (q, r) = (glue_realize(&g, &d, 1).unwrap(), glue_realize(&g, &scaled, 1).unwrap());
        let q3 = Placement::new(q.coords.iter().map(|c| [3.0 * c[0], 3.0 * c[1]]).collect());
        assert!(congruent(&q3, &r, 1e-8));
    }

    #[test]
    fn rejects_flexible_graphs() {
        let g = cycle(4);
        let d = measure_lengths(&g, &Placement::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])).unwrap();
        assert_eq!(glue_realize(&g, &d, 0), Err(RealizationError::NotRigid));
    }
}
