//! Quick invariant suites over seeded random inputs, with pass/fail counts.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::decomposition::cleavage_units;
use crate::graph::{families, Graph};
use crate::planarity::is_planar;
use crate::realization::{
    glue_realize, henneberg_order, measure_lengths, quadratic_realize, random_generic_placement, rigidity_jacobian,
    sign_flips, standard_position, BranchVector, Placement,
};
use crate::rigidity::{generic_rank, is_rigid, matrix_rank_oracle};
use crate::solvability::{decide_solvability, verify_certificate, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Graph on `n` vertices keeping each pair with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|_| rng.gen_bool(p)).collect();
    Graph::new(n, edges).expect("pairs are distinct")
}

/// Random rigid graph on `n` vertices: a random graph with missing edges
/// added until it is rigid.
pub fn random_rigid_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut g = random_graph(n, p, rng);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    for (a, b) in pairs {
        if is_rigid(&g) {
            break;
        }
        if !g.has_edge(a, b) {
            g = g.with_edge(a, b);
        }
    }
    g
}

fn suite(name: &'static str, cases: impl IntoIterator<Item = bool>) -> SuiteResult {
    let (mut passed, mut failed) = (0, 0);
    for ok in cases {
        if ok {
            passed += 1;
        } else {
            failed += 1;
        }
    }
    SuiteResult { name, passed, failed }
}

fn named_graphs() -> Vec<Graph> {
    let mut gs = vec![families::complete(3), families::complete(4), families::prism(), families::complete_bipartite(3, 3)];
    gs.extend((4..=8).map(families::wheel));
    gs.extend((5..=8).map(families::wheel_minus_rim_edge));
    gs.push(families::two_k4_minus_uv());
    gs
}

fn residual(g: &Graph, p: &Placement, q: &Placement) -> f64 {
    match (measure_lengths(g, p), measure_lengths(g, q)) {
        (Ok(a), Ok(b)) => a.max_relative_residual(&b),
        _ => f64::INFINITY,
    }
}

/// Runs every suite with inputs drawn from `seed`.
pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites = Vec::new();

    let graphs: Vec<Graph> = (0..100).map(|_| {
        let n = rng.gen_range(1..=9);
        random_graph(n, rng.gen_range(0.2..0.9), &mut rng)
    }).collect();
    suites.push(suite(
        "rankOracleAgreement",
        graphs.iter().chain(named_graphs().iter()).map(|g| {
            let s = rng.gen();
            generic_rank(g) == matrix_rank_oracle(g, s) || generic_rank(g) == matrix_rank_oracle(g, s ^ 1)
        }).collect::<Vec<_>>(),
    ));

    let rigid: Vec<Graph> = (0..40).map(|_| {
        let n = rng.gen_range(3..=7);
        random_rigid_graph(n, 0.4, &mut rng)
    }).collect();
    suites.push(suite(
        "cleavageReconstruction",
        rigid.iter().map(|g| cleavage_units(g).map(|d| d.reconstruct() == g.sorted_edges()).unwrap_or(false)),
    ));

    suites.push(suite(
        "certificatesVerify",
        rigid.iter().chain(named_graphs().iter()).map(|g| decide_solvability(g).map(|d| verify_certificate(g, &d)).unwrap_or(false)),
    ));

    suites.push(suite(
        "relabelInvariance",
        rigid.iter().filter(|g| is_planar(g)).map(|g| {
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rng);
            let a = decide_solvability(g).map(|d| d.verdict);
            let b = decide_solvability(&g.relabel(&perm)).map(|d| d.verdict);
            a.is_ok() && a == b
        }).collect::<Vec<_>>(),
    ));

    suites.push(suite(
        "globallyRigidIsSolvable",
        rigid.iter().filter(|g| crate::rigidity::is_globally_rigid(g)).map(|g| {
            matches!(decide_solvability(g), Ok(d) if d.verdict == Verdict::Yes)
        }).collect::<Vec<_>>(),
    ));

    let realizable: Vec<Graph> = named_graphs().into_iter().filter(|g| g.n() >= 3).collect();
    suites.push(suite(
        "realizationRoundTrip",
        realizable.iter().map(|g| {
            let p = random_generic_placement(g, rng.gen()).to_float();
            let Ok(d) = measure_lengths(g, &p) else { return false };
            let glued = glue_realize(g, &d, seed).map(|q| residual(g, &p, &q) < 1e-7).unwrap_or(false);
            let quad = match henneberg_order(g) {
                Some(order) => quadratic_realize(g, &d, &order, &BranchVector::all_plus(order.steps.len() + 1))
                    .map(|q| residual(g, &p, &q) < 1e-9)
                    .unwrap_or(false),
                None => true,
            };
            glued && quad
        }).collect::<Vec<_>>(),
    ));

    let k = families::complete(6);
    suites.push(suite(
        "standardPositionFlips",
        (0..30).map(|_| {
            let p = random_generic_placement(&k, rng.gen()).to_float();
            let Ok(q) = standard_position(&p, 0, 1) else { return false };
            sign_flips(&q).iter().all(|f| residual(&k, &p, f) <= 1e-12)
        }).collect::<Vec<_>>(),
    ));

    suites.push(suite(
        "jacobianFiniteDifferences",
        rigid.iter().take(15).map(|g| {
            let p = random_generic_placement(g, rng.gen()).to_float();
            let j = rigidity_jacobian(g, &p);
            let h = 1e-6;
            (0..2 * g.n()).all(|c| {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus.coords[c / 2][c % 2] += h;
                minus.coords[c / 2][c % 2] -= h;
                let (Ok(dp), Ok(dm)) = (measure_lengths(g, &plus), measure_lengths(g, &minus)) else { return false };
                (0..g.m()).all(|row| {
                    let fd = (dp.d[row] - dm.d[row]) / (2.0 * h);
                    (fd - j[(row, c)]).abs() <= 1e-6 * j[(row, c)].abs().max(1.0)
                })
            })
        }).collect::<Vec<_>>(),
    ));

    let passed = suites.iter().map(|s| s.passed).sum();
    let failed = suites.iter().map(|s| s.failed).sum();
    SelftestReport { seed, suites, passed, failed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let report = run_selftest(0);
        assert!(report.ok(), "{report:?}");
        assert!(report.suites.iter().all(|s| s.passed > 0));
        assert_eq!(run_selftest(0), report);
    }

    #[test]
    fn random_rigid_graphs_are_rigid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 2..9 {
            assert!(is_rigid(&random_rigid_graph(n, 0.1, &mut rng)));
        }
    }
}
