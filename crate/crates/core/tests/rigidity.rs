use proptest::prelude::*;
use rigidsolve::connectivity::is_k_connected;
use rigidsolve::graph::{families::*, Graph, Piece};
use rigidsolve::rigidity::*;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn graph_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2))).prop_map(
        |(n, bits)| Graph::new(n, pairs(n).into_iter().zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap(),
    )
}

/// Largest independent edge set by subset counting: a set is independent
/// when every vertex subset of size `k >= 2` spans at most `2k - 3` of it.
fn laman_rank(g: &Graph) -> usize {
    let n = g.n();
    let m = g.m();
    let independent = |mask: u32| {
        (1u32..1 << n).filter(|s| s.count_ones() >= 2).all(|s| {
            let inside = (0..m).filter(|&i| mask >> i & 1 == 1).filter(|&i| {
                let (a, b) = g.edges()[i];
                s >> a & 1 == 1 && s >> b & 1 == 1
            });
            inside.count() <= 2 * s.count_ones() as usize - 3
        })
    };
    (0u32..1 << m).filter(|&mask| independent(mask)).map(|mask| mask.count_ones() as usize).max().unwrap_or(0)
}

fn sub(g: &Graph, mask: u32) -> Vec<(usize, usize)> {
    g.edges().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect()
}

/// Redundantly rigid on its own vertex set.
fn redundantly_rigid_piece(edges: &[(usize, usize)]) -> bool {
    let g = Piece::from_host_edges(edges, &[]).graph;
    is_rigid(&g) && g.edges().iter().all(|&(a, b)| is_rigid(&g.without_edge(a, b)))
}

/// Maximal redundantly rigid edge sets, by enumerating every subset.
fn brute_components(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let good: Vec<u32> = (1u32..1 << g.m()).filter(|&mask| redundantly_rigid_piece(&sub(g, mask))).collect();
    let mut out: Vec<Vec<(usize, usize)>> = good
        .iter()
        .filter(|&&a| !good.iter().any(|&b| b != a && b & a == a))
        .map(|&mask| {
            let mut es = sub(g, mask);
            es.sort_unstable();
            es
        })
        .collect();
    out.sort();
    out
}

#[test]
fn named_ranks() {
    let cases = [
        (complete(3), 3),
        (complete(4), 5),
        (complete(5), 7),
        (cycle(4), 4),
        (cycle(8), 8),
        (complete_bipartite(3, 3), 9),
        (complete_bipartite(3, 4), 11),
        (prism(), 9),
        (wheel(8), 13),
    ];
    for (g, rank) in cases {
        assert_eq!(generic_rank(&g), rank);
        assert_eq!(matrix_rank_oracle(&g, 1), rank);
    }
}

#[test]
fn named_flags() {
    let k33 = complete_bipartite(3, 3);
    assert!(is_minimally_rigid(&k33) && !is_redundantly_rigid(&k33) && !is_globally_rigid(&k33));
    let k34 = complete_bipartite(3, 4);
    assert!(is_redundantly_rigid(&k34) && is_globally_rigid(&k34));
    assert!(is_globally_rigid(&complete(4)) && is_globally_rigid(&wheel(6)));
    assert!(!is_globally_rigid(&prism()) && is_minimally_rigid(&prism()));
    assert!(!is_rigid(&cycle(4)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rank_matches_subset_counting(g in graph_strategy(1, 6).prop_filter("small", |g| g.m() <= 12)) {
        prop_assert_eq!(generic_rank(&g), laman_rank(&g));
    }

    #[test]
    fn rank_matches_the_matrix_oracle(g in graph_strategy(1, 10), seed in any::<u64>()) {
        let r = generic_rank(&g);
        prop_assert!(r == matrix_rank_oracle(&g, seed) || r == matrix_rank_oracle(&g, seed.wrapping_add(1)));
        prop_assert!(r <= g.m() && r <= (2 * g.n()).saturating_sub(3));
    }

    #[test]
    fn rank_ignores_labels(g in graph_strategy(2, 9), shift in 0usize..9) {
        let perm: Vec<usize> = (0..g.n()).map(|i| (i + shift) % g.n()).collect();
        prop_assert_eq!(generic_rank(&g), generic_rank(&g.relabel(&perm)));
    }

    #[test]
    fn redundant_edges_keep_the_rank(g in graph_strategy(2, 7)) {
        let report = redundancy(&g);
        for &(a, b) in g.edges() {
            let redundant = generic_rank(&g.without_edge(a, b)) == report.rank;
            prop_assert_eq!(redundant, report.redundant_edges.contains(&(a, b)));
        }
        prop_assert_eq!(is_redundantly_rigid(&g), g.n() >= 2 && is_rigid(&g) && g.m() > 0
            && g.edges().iter().all(|&(a, b)| is_rigid(&g.without_edge(a, b))));
    }

    #[test]
    fn components_match_brute_force(g in graph_strategy(3, 6).prop_filter("small", |g| g.m() <= 11)) {
        let mut got = redundancy(&g).components;
        for c in &mut got {
            c.sort_unstable();
        }
        got.sort();
        prop_assert_eq!(got, brute_components(&g));
    }

    #[test]
    fn global_rigidity_criterion(g in graph_strategy(1, 8)) {
        let expected = (g.n() <= 3 && g.is_complete()) || (is_k_connected(&g, 3) && is_redundantly_rigid(&g));
        prop_assert_eq!(is_globally_rigid(&g), expected);
    }
}
