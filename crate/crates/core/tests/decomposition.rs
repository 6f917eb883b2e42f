use proptest::prelude::*;
use rigidsolve::connectivity::is_k_connected;
use rigidsolve::decomposition::*;
use rigidsolve::graph::{families::*, Graph};
use rigidsolve::planarity::is_planar;
use rigidsolve::rigidity::{is_minimally_rigid, is_rigid};

fn rigid_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (3..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_filter_map("not rigid", |(n, bits)| {
            let pairs = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
            let g = Graph::new(n, pairs.zip(bits).filter(|(_, keep)| *keep).map(|(e, _)| e)).unwrap();
            is_rigid(&g).then_some(g)
        })
}

#[test]
fn named_decompositions() {
    let d = cleavage_units(&two_k4_minus_uv()).unwrap();
    assert_eq!(d.units.len(), 2);
    assert_eq!(d.reconstruct(), two_k4_minus_uv().sorted_edges());
    assert_eq!(cleavage_units(&prism()).unwrap().units.len(), 1);
    assert_eq!(cleavage_units(&cycle(5)), Err(DecompositionError::NotRigid));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn units_do_not_depend_on_split_order(g in rigid_graph(8), pick in any::<u64>()) {
        let first = cleavage_units(&g).unwrap();
        let mut state = pick;
        let other = cleavage_units_by(&g, |seps| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % seps.len()
        }).unwrap();
        prop_assert_eq!(first.unit_multiset(), other.unit_multiset());
        prop_assert_eq!(first.reconstruct(), g.sorted_edges());
        prop_assert_eq!(other.reconstruct(), g.sorted_edges());
        for unit in &first.units {
            let piece = unit.piece().graph;
            match unit.kind {
                UnitKind::Triangle => prop_assert_eq!((piece.n(), piece.m()), (3, 3)),
                UnitKind::ThreeConnected => prop_assert!(is_k_connected(&piece, 3) && is_rigid(&piece)),
            }
        }
    }

    #[test]
    fn reduction_reaches_a_minimal_graph(g in rigid_graph(8).prop_filter("3-connected, not minimal", |g| {
        is_k_connected(g, 3) && !is_minimally_rigid(g)
    })) {
        let planar = is_planar(&g);
        match reduce_to_minimal(&g, planar) {
            Ok(steps) => {
                let mut excess_now = excess(&g);
                for step in &steps {
                    prop_assert_eq!(step.excess_before, excess_now);
                    prop_assert!(step.excess_after < step.excess_before);
                    prop_assert!(is_k_connected(&step.result, 3) && is_rigid(&step.result));
                    prop_assert!(!planar || is_planar(&step.result));
                    excess_now = step.excess_after;
                }
                let last = steps.last().map_or(&g, |s| &s.result);
                prop_assert!(is_minimally_rigid(last));
            }
            // A component with fewer than three attachments, or a rim that
            // cannot reach degree 4, leaves nothing to replace.
            Err(DecompositionError::RimTooSmall(_) | DecompositionError::LowRimDegree(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
