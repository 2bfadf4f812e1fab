use proptest::prelude::*;

use coarse_tw::budget::Budget;
use coarse_tw::builders::{decompose_round, decompose_simple, uncrowd, BuilderParams, RoundBallSet};
use coarse_tw::decomposition::{
    balanced_bag, layered_tree_partition, potential, tree_partition_to_tree_decomposition, validate_tree_decomposition,
    validate_tree_partition, LayerShape, TreeDecomposition,
};
use coarse_tw::distance_graph::{build_distance_graph, check_degree_bound, check_quasi_isometry};
use coarse_tw::graph::{
    ball, ball_union, bfs, components, estimate_doubling_dimension, is_maximal_distance_r_independent,
    maximal_distance_r_independent_set, Ball, DoublingScales, Graph,
};
use coarse_tw::rational::int;
use coarse_tw::separator::{bsn_over_indicators, find_separator, is_balanced_separator, OracleMode, WeightFn};
use coarse_tw::transforms::{
    coarsen_tree_partition, level_clusters, lift_decomposition, separator_transfer_unweighted,
    separator_transfer_weighted, ClusterRule, CoarseningParams,
};
use coarse_tw::Error;

/// Connected graph: a random tree (parent of `i` below `i`) plus extra edges.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        let extra = prop::collection::vec((0..n, 0..n), 0..n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (i + 1, p)).collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..2 * n)
            .prop_map(move |e| Graph::from_edges(n, e.into_iter().filter(|(a, b)| a != b)).unwrap())
    })
}

fn weights(n: usize) -> impl Strategy<Value = WeightFn> {
    prop::collection::vec(0i64..5, n).prop_map(|w| WeightFn::new(w.into_iter().map(int).collect()).unwrap())
}

fn graph_and_weights(max_n: usize) -> impl Strategy<Value = (Graph, WeightFn)> {
    any_graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), weights(n))
    })
}

fn budget() -> Budget {
    Budget::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn balls_grow_with_the_radius(g in any_graph(12), r in 0u64..4) {
        for v in 0..g.n() {
            let small = ball(&g, v, r).unwrap();
            let big = ball(&g, v, r + 1).unwrap();
            prop_assert!(small.contains(&v));
            prop_assert!(small.iter().all(|x| big.binary_search(x).is_ok()));
        }
    }

    #[test]
    fn greedy_independent_sets_are_maximal(g in any_graph(14), r in 1u64..4) {
        let set = maximal_distance_r_independent_set(&g, r).unwrap();
        prop_assert!(is_maximal_distance_r_independent(&g, &set, r).unwrap().is_ok());
    }

    #[test]
    fn separator_witnesses_are_balanced((g, mu) in graph_and_weights(9), k in 1usize..3, r in 0u64..3) {
        if let Some(w) = find_separator(&g, &mu, k, r, OracleMode::Exact, &budget()).unwrap() {
            prop_assert!(w.balls.len() <= k);
            prop_assert_eq!(&ball_union(&g, &w.balls).unwrap(), &w.union);
            prop_assert!(is_balanced_separator(&g, &mu, &w.union).unwrap());
        }
    }

    #[test]
    fn distance_graphs_meet_their_distortion_bounds(g in connected_graph(14), r in 1u64..4) {
        for (sigma, weighted) in [(3, true), (4, false), (5, true)] {
            let dg = build_distance_graph(&g, r, sigma, weighted, None).unwrap();
            prop_assert!(check_quasi_isometry(&g, &dg).is_ok());
        }
    }

    #[test]
    fn degree_bound_with_the_estimated_dimension(g in connected_graph(12), r in 1u64..3) {
        let est = estimate_doubling_dimension(&g, 12, DoublingScales::Real, &budget()).unwrap();
        let dg = build_distance_graph(&g, r, 3, true, None).unwrap();
        let rep = check_degree_bound(&g, &dg, est.m);
        prop_assert!(rep.holds, "{:?}", rep);
        prop_assert!(!rep.estimate_undershoots);
    }

    #[test]
    fn simple_builder_meets_its_bounds(g in any_graph(9), r in 1u64..3) {
        let k = bsn_over_indicators(&g, r, 4, &budget()).unwrap().unwrap();
        let built = decompose_simple(&g, &BuilderParams::new(k, r)).unwrap();
        prop_assert!(validate_tree_decomposition(&g, &built.td).is_empty());
        prop_assert!(built.report.all_hold(), "{:?}", built.report.checks);
    }

    #[test]
    fn round_builder_meets_its_bounds(g in any_graph(9), r in 1u64..3) {
        let k = bsn_over_indicators(&g, r, 4, &budget()).unwrap().unwrap();
        let built = decompose_round(&g, &BuilderParams::new(k, r)).unwrap();
        prop_assert!(validate_tree_decomposition(&g, &built.td).is_empty());
        prop_assert!(built.report.all_hold(), "{:?}", built.report.checks);
    }

    #[test]
    fn uncrowding_keeps_the_union_and_the_potential(
        g in connected_graph(12),
        raw in prop::collection::vec((0usize..12, 1u64..3), 0..24),
    ) {
        let balls: Vec<Ball> = raw.into_iter().map(|(c, l)| Ball::new(c % g.n(), l)).collect();
        let set = RoundBallSet::new(1, balls.clone()).unwrap();
        let out = uncrowd(&g, &set, &BuilderParams::new(2, 1)).unwrap();
        let before = ball_union(&g, &balls).unwrap();
        let after = ball_union(&g, &out.balls).unwrap();
        prop_assert!(before.iter().all(|v| after.binary_search(v).is_ok()));
        prop_assert!(out.potential() <= set.potential());
    }

    #[test]
    fn sink_bags_are_balanced(g in connected_graph(10), seed_weights in prop::collection::vec(0i64..4, 10)) {
        let mu = WeightFn::new(seed_weights[..g.n()].iter().map(|&w| int(w)).collect()).unwrap();
        for shape in [LayerShape::Path, LayerShape::Branching] {
            let tp = layered_tree_partition(&g, shape).unwrap();
            prop_assert!(validate_tree_partition(&g, &tp).is_empty());
            let td = tree_partition_to_tree_decomposition(&g, &tp).unwrap();
            prop_assert!(validate_tree_decomposition(&g, &td).is_empty());
            let t = balanced_bag(&g, &td, &mu).unwrap();
            prop_assert!(is_balanced_separator(&g, &mu, &td.nodes[t].bag).unwrap());
        }
    }

    #[test]
    fn descendant_clusters_partition_and_stay_apart(parents in prop::collection::vec(any::<prop::sample::Index>(), 0..30), p in 1u64..4) {
        let t = parents.len() + 1;
        let mut adj = vec![Vec::new(); t];
        for (i, ix) in parents.iter().enumerate() {
            let parent = ix.index(i + 1);
            adj[i + 1].push(parent);
            adj[parent].push(i + 1);
        }
        let lc = level_clusters(&adj, 0, p, ClusterRule::Descendant).unwrap();
        let mut seen = vec![0; t];
        lc.clusters.iter().flatten().for_each(|&x| seen[x] += 1);
        prop_assert!(seen.iter().all(|&c| c == 1));
        prop_assert_eq!(lc.tree_edges.len(), lc.levels.len() - 1);
        // The verbatim rule either agrees or refuses.
        match level_clusters(&adj, 0, p, ClusterRule::Verbatim) {
            Ok(v) => prop_assert_eq!(v, lc),
            Err(e) => {
                let refused = matches!(e, Error::InvariantViolation { .. });
                prop_assert!(refused, "{}", e);
            }
        }
    }

    #[test]
    fn coarsening_gives_tree_partitions_of_spread_r(g in any_graph(16), r in 1u64..3, branching in any::<bool>()) {
        let dg = build_distance_graph(&g, r, 3, true, None).unwrap();
        let shape = if branching { LayerShape::Branching } else { LayerShape::Path };
        let tp_h = layered_tree_partition(&dg.h, shape).unwrap();
        let phi: Vec<usize> = (0..g.n()).map(|u| dg.phi_h(u)).collect();
        let params = CoarseningParams::new(int(3), int(3), int(3), r).unwrap();
        let c = coarsen_tree_partition(&g, &dg.weighted_h(), &phi, &tp_h, &params, ClusterRule::Descendant).unwrap();
        prop_assert_eq!(c.tp.spread, r);
        prop_assert!(validate_tree_partition(&g, &c.tp).is_empty());
        // The size and degree bounds read tree edges as H-adjacencies, which
        // only holds when the layering is a single BFS.
        if components(&g, &[]).unwrap().len() == 1 {
            prop_assert!(c.report.all_hold(), "{:?}", c.report.checks);
        }
        for u in 0..g.n() {
            let d = bfs(&g, u).unwrap();
            for v in 0..g.n() {
                if phi[u] == phi[v] {
                    prop_assert!(d.get(v).unwrap() <= 9 * r);
                }
            }
        }
    }

    #[test]
    fn lifted_decompositions_are_valid(g in any_graph(14), r in 1u64..3) {
        let dg = build_distance_graph(&g, r, 4, false, None).unwrap();
        let k = bsn_over_indicators(&dg.h, 1, 4, &budget()).unwrap().unwrap();
        let built = decompose_simple(&dg.h, &BuilderParams::new(k, 1)).unwrap();
        let lifted = lift_decomposition(&g, &dg, &built.td).unwrap();
        prop_assert_eq!(lifted.radius, (4 * lifted.s + 1) * r);
        prop_assert!(validate_tree_decomposition(&g, &lifted.td).is_empty());
    }

    #[test]
    fn transfers_are_balanced(g in connected_graph(12), r in 1u64..3, k in 1usize..3) {
        let budget = budget();
        let est = estimate_doubling_dimension(&g, 6, DoublingScales::Real, &budget).unwrap();
        let dg = build_distance_graph(&g, r, 3, true, None).unwrap();
        let mu = WeightFn::uniform(dg.h.n());
        match separator_transfer_weighted(&g, &dg, &mu, k, OracleMode::Exact, Some(est.m), &budget) {
            Ok(t) => prop_assert!(is_balanced_separator(&dg.h, &mu, &t.separator).unwrap()),
            Err(e) => prop_assert!(matches!(e, Error::InvalidInput(_)), "{e}"),
        }
        let dg = build_distance_graph(&g, r, 4, false, None).unwrap();
        let mu = WeightFn::uniform(dg.h.n());
        match separator_transfer_unweighted(&g, &dg, &mu, k, OracleMode::Exact, &budget) {
            Ok(t) => {
                prop_assert!(t.witness.balls.len() <= k);
                prop_assert!(is_balanced_separator(&dg.h, &mu, &t.witness.union).unwrap());
            }
            Err(e) => prop_assert!(matches!(e, Error::InvalidInput(_)), "{e}"),
        }
    }

    #[test]
    fn decompositions_survive_json(g in any_graph(10)) {
        let built = decompose_simple(&g, &BuilderParams::new(g.n().max(1), 1)).unwrap();
        let back = TreeDecomposition::from_json(&built.td.to_json()).unwrap();
        prop_assert_eq!(&back, &built.td);
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);
    }

    #[test]
    fn potential_is_additive(radii in prop::collection::vec(1u64..6, 0..8), r in 1u64..4) {
        let balls: Vec<Ball> = radii.iter().map(|&l| Ball::new(0, l * r)).collect();
        let total: u64 = radii.iter().map(|&l| 1u64 << l).sum();
        prop_assert_eq!(potential(&balls, r).unwrap(), total.into());
    }
}
