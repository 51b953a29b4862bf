mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::*;
use mwm_reduce::cascade::prepare;
use mwm_reduce::instance::Edge;
use mwm_reduce::matching::Matching;
use mwm_reduce::mwis::{dual_hypergraph, duplicate_vertices, matching_to_independent_set};
use mwm_reduce::partition::{build_shift_partition, compute_params, is_gap_block, weight_levels, CascadeParams};
use mwm_reduce::transform::{clamp_rescale, exponent_of};
use mwm_reduce::{
    exact_matching_bruteforce, greedy_matching, is_valid_matching, matching_weight, mwis_via_duality,
    reduce_and_solve, ExactSolver, GreedySolver, VertexWeightedGraph, WeightedHypergraph,
};

fn hypergraph(max_n: usize, max_m: usize) -> impl Strategy<Value = WeightedHypergraph> {
    (2..=max_n, 2usize..=3).prop_flat_map(move |(n, s)| {
        let edge = (proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=s.min(n)), 1.0f64..1e5);
        proptest::collection::vec(edge, 0..=max_m).prop_map(move |edges| {
            let edges = edges.into_iter().map(|(vs, w)| Edge::new(vs, w.round().max(1.0))).collect();
            WeightedHypergraph::new(n, s, edges).unwrap()
        })
    })
}

fn vertex_graph(max_n: usize, max_w: u64) -> impl Strategy<Value = VertexWeightedGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        (
            proptest::collection::vec(1..=max_w, n),
            proptest::sample::subsequence(pairs, 0..=len),
        )
            .prop_map(|(w, e)| VertexWeightedGraph::new(w, e).unwrap())
    })
}

fn eps_choice() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(0.25), Just(0.1), Just(0.05)]
}

#[test]
fn suite_params_are_pinned() {
    // the l values the acceptance suites run with
    assert_eq!(compute_params(0.05, 2).unwrap(), CascadeParams { eps: 0.05, s: 2, k: 21, l: 76 });
    assert_eq!(compute_params(0.2, 3).unwrap().l, 15);
    assert!(is_gap_block(0, 3, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn subsets_of_matchings_are_matchings(h in hypergraph(8, 10), mask in any::<u32>()) {
        let m = greedy_matching(&h).ids();
        let sub: Vec<usize> = m.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        prop_assert!(is_valid_matching(&h, &sub));
    }

    #[test]
    fn weight_is_additive(h in hypergraph(8, 10), mask in any::<u32>()) {
        let m = greedy_matching(&h).ids();
        let (a, b): (Vec<usize>, Vec<usize>) = m.iter().partition(|&&e| mask >> (e % 32) & 1 == 1);
        let total = matching_weight(&h, &Matching::from_ids(m.clone())).unwrap();
        let parts = matching_weight(&h, &Matching::from_ids(a)).unwrap()
            + matching_weight(&h, &Matching::from_ids(b)).unwrap();
        prop_assert!((total - parts).abs() <= 1e-9 * total.max(1.0));
    }

    #[test]
    fn clamping_moves_opt_by_at_most_eps_w(h in hypergraph(7, 12), eps in eps_choice()) {
        let (clamped, scale) = clamp_rescale(&h, eps).unwrap();
        let unscaled: Vec<f64> = clamped.weights().iter().map(|w| w / scale).collect();
        let opt = oracle_opt(&h);
        let opt_clamped = oracle_best(&h, &unscaled, &|_| true).0;
        let w_max = h.max_weight().unwrap_or(0.0);
        prop_assert!(geq(opt_clamped, opt));
        prop_assert!(geq(opt, opt_clamped - eps * w_max));
    }

    #[test]
    fn exponents_are_monotone(a in 1.0f64..1e9, b in 1.0f64..1e9, eps in eps_choice()) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(exponent_of(lo, eps) <= exponent_of(hi, eps));
    }

    #[test]
    fn cascade_output_is_valid_and_deterministic(h in hypergraph(10, 30), eps in eps_choice()) {
        for solver in [&GreedySolver as &dyn mwm_reduce::MatchingSolver, &ExactSolver { cap: 30 }] {
            let a = reduce_and_solve(&h, eps, solver).unwrap();
            prop_assert!(is_valid_matching(&h, &a.best.ids()));
            for s in &a.per_shift {
                prop_assert!(is_valid_matching(&h, &s.matching.ids()));
            }
            let b = reduce_and_solve(&h, eps, solver).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn some_shift_is_good(h in hypergraph(8, 12), eps in eps_choice()) {
        let res = reduce_and_solve(&h, eps, &ExactSolver::default()).unwrap();
        let (rounded, _) = prepare(&h, eps).unwrap();
        let opt_rounded = oracle_best(&h, &rounded.rounded_weights(), &|_| true).0;
        let best = res.per_shift.iter().map(|s| s.rounded_weight).fold(0.0, f64::max);
        let k = res.params.k as f64;
        prop_assert!(geq(best, (1.0 - 1.0 / k) * (1.0 - res.transform.eps) * opt_rounded));
    }

    #[test]
    fn cascade_keeps_its_heaviest_interval(h in hypergraph(10, 30), eps in eps_choice()) {
        let res = reduce_and_solve(&h, eps, &GreedySolver).unwrap();
        let best = res.best_shift;
        let shift_trace: Vec<_> = res.trace.iter().filter(|t| t.x == best).collect();
        if let Some(first) = shift_trace.first() {
            prop_assert!(geq(res.weight, first.weight));
        }
        let summed: f64 = shift_trace.iter().map(|t| t.weight).sum();
        prop_assert!((summed - res.weight).abs() <= 1e-9 * res.weight.max(1.0));
    }

    #[test]
    fn greedy_is_maximal_and_within_s(h in hypergraph(8, 14)) {
        let m = greedy_matching(&h);
        let ids = m.ids();
        prop_assert!(is_valid_matching(&h, &ids));
        for e in 0..h.num_edges() {
            if !m.contains(e) {
                let mut with = ids.clone();
                with.push(e);
                prop_assert!(!is_valid_matching(&h, &with), "edge {} could be added", e);
            }
        }
        let exact = exact_matching_bruteforce(&h, 20).unwrap();
        let g = matching_weight(&h, &m).unwrap();
        let x = matching_weight(&h, &exact).unwrap();
        prop_assert!(geq(g, x / h.max_edge_size() as f64));
        prop_assert_eq!(greedy_matching(&h), m);
    }

    #[test]
    fn exact_is_an_argmax(h in hypergraph(8, 12)) {
        let exact = exact_matching_bruteforce(&h, 20).unwrap();
        prop_assert!(is_valid_matching(&h, &exact.ids()));
        let w = matching_weight(&h, &exact).unwrap();
        prop_assert!((w - oracle_opt(&h)).abs() <= 1e-9 * w.max(1.0));
        prop_assert_eq!(exact_matching_bruteforce(&h, 20).unwrap(), exact);
    }

    #[test]
    fn partition_depends_on_distinct_levels_only(h in hypergraph(8, 20), eps in eps_choice()) {
        let (rounded, tr) = prepare(&h, eps).unwrap();
        let params = compute_params(tr.eps, h.max_edge_size()).unwrap();
        let levels = weight_levels(&rounded);
        let mut all = rounded.exponents.clone();
        all.sort_unstable_by(|a, b| b.cmp(a));
        for x in 0..params.k {
            prop_assert_eq!(build_shift_partition(&levels, &params, x), build_shift_partition(&all, &params, x));
        }
    }

    #[test]
    fn dual_matchings_biject_with_independent_sets(g in vertex_graph(7, 9)) {
        let dual = dual_hypergraph(&g);
        let mut sets = HashSet::new();
        let mut count = 0usize;
        for_each_matching(&dual, &|_| true, &mut |ids| {
            let m = Matching::from_ids(ids.iter().copied());
            let set = matching_to_independent_set(&g, &m).unwrap();
            assert!(g.is_independent(&set));
            assert_eq!(g.set_weight(&set) as f64, matching_weight(&dual, &m).unwrap());
            sets.insert(set);
            count += 1;
        });
        let n = g.num_vertices();
        let independent = (0u32..1 << n)
            .filter(|mask| g.edges().iter().all(|&(u, v)| mask >> u & 1 == 0 || mask >> v & 1 == 0))
            .count();
        prop_assert_eq!(sets.len(), count);
        prop_assert_eq!(count, independent);
    }

    #[test]
    fn all_copies_of_an_independent_set_stay_independent(g in vertex_graph(8, 5), mask in any::<u32>()) {
        // build an independent set greedily from the mask order
        let mut set: Vec<usize> = Vec::new();
        for v in (0..g.num_vertices()).filter(|v| mask >> v & 1 == 1) {
            if g.neighbors(v).iter().all(|u| !set.contains(u)) {
                set.push(v);
            }
        }
        let dup = duplicate_vertices(&g, 1000).unwrap();
        let copies: HashSet<usize> = set.iter().flat_map(|&v| dup.copies[v].clone()).collect();
        for &c in &copies {
            prop_assert!(dup.adjacency[c].iter().all(|d| !copies.contains(d)));
        }
        let mut back = dup.pull_back(&copies.iter().copied().collect::<Vec<_>>());
        back.sort_unstable();
        set.sort_unstable();
        prop_assert_eq!(back, set);
    }

    #[test]
    fn mwis_output_is_independent(g in vertex_graph(10, 20), eps in eps_choice()) {
        for solver in ["exact", "greedy", "dup-greedy"] {
            let res = mwis_via_duality(&g, eps, solver).unwrap();
            prop_assert!(g.is_independent(&res.vertices));
            prop_assert_eq!(res.weight, g.set_weight(&res.vertices));
            if solver == "exact" {
                prop_assert!(geq(res.weight as f64, (1.0 - 3.0 * eps) * oracle_mwis(&g) as f64));
            }
        }
    }
}
