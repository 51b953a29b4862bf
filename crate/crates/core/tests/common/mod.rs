//! Test-only brute-force oracles. Deliberately naive: plain enumeration, no
//! bounding, nothing shared with the library's solvers.

#![allow(dead_code)]

use mwm_reduce::experiment::{materialize, InstanceBlock, InstanceSource, IntRange, Problem};
use mwm_reduce::generate::{InstanceKind, WeightDist};
use mwm_reduce::{VertexWeightedGraph, WeightedHypergraph};

/// Every matching of `h` restricted to edges where `allowed` holds, reported
/// through `visit` as a list of edge ids.
pub fn for_each_matching(h: &WeightedHypergraph, allowed: &dyn Fn(usize) -> bool, visit: &mut dyn FnMut(&[usize])) {
    fn rec(
        h: &WeightedHypergraph,
        allowed: &dyn Fn(usize) -> bool,
        next: usize,
        used: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if next == h.num_edges() {
            visit(chosen);
            return;
        }
        rec(h, allowed, next + 1, used, chosen, visit);
        if allowed(next) {
            let vs = h.edge(next).vertices();
            if vs.iter().all(|v| !used.contains(v)) {
                used.extend_from_slice(vs);
                chosen.push(next);
                rec(h, allowed, next + 1, used, chosen, visit);
                chosen.pop();
                used.truncate(used.len() - vs.len());
            }
        }
    }
    rec(h, allowed, 0, &mut Vec::new(), &mut Vec::new(), visit);
}

/// Maximum total of `weights` over matchings of allowed edges, with one
/// maximizer.
pub fn oracle_best(h: &WeightedHypergraph, weights: &[f64], allowed: &dyn Fn(usize) -> bool) -> (f64, Vec<usize>) {
    let mut best = (0.0, Vec::new());
    for_each_matching(h, allowed, &mut |m| {
        let w: f64 = m.iter().map(|&id| weights[id]).sum();
        if w > best.0 {
            best = (w, m.to_vec());
        }
    });
    best
}

pub fn oracle_opt(h: &WeightedHypergraph) -> f64 {
    oracle_best(h, &h.weights(), &|_| true).0
}

/// Maximum weight independent set by enumerating all vertex subsets.
pub fn oracle_mwis(g: &VertexWeightedGraph) -> u64 {
    let n = g.num_vertices();
    assert!(n <= 20);
    let mut best = 0;
    'subsets: for mask in 0u32..(1 << n) {
        for &(u, v) in g.edges() {
            if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                continue 'subsets;
            }
        }
        let w: u64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| g.weight(v)).sum();
        best = best.max(w);
    }
    best
}

pub fn graph_suite_block() -> InstanceBlock {
    InstanceBlock {
        id: "graphs".into(),
        source: InstanceSource::Generated {
            kind: InstanceKind::Graph,
            n: IntRange { lo: 4, hi: 10 },
            m: IntRange { lo: 1, hi: 20 },
            s: 2,
            weights: WeightDist::Uniform { lo: 1.0, hi: 1e6 },
        },
        seed: 1000,
        count: 200,
    }
}

pub fn hypergraph_suite_block() -> InstanceBlock {
    InstanceBlock {
        id: "hypergraphs".into(),
        source: InstanceSource::Generated {
            kind: InstanceKind::Hypergraph,
            n: IntRange { lo: 5, hi: 12 },
            m: IntRange { lo: 1, hi: 14 },
            s: 3,
            weights: WeightDist::Uniform { lo: 1.0, hi: 1e6 },
        },
        seed: 5000,
        count: 100,
    }
}

pub fn mwis_suite_block() -> InstanceBlock {
    InstanceBlock {
        id: "mwis".into(),
        source: InstanceSource::VertexWeighted {
            n: IntRange { lo: 4, hi: 10 },
            m: IntRange { lo: 0, hi: 20 },
            max_degree: 4,
            max_weight: 20,
        },
        seed: 9000,
        count: 100,
    }
}

pub fn hypergraphs(block: &InstanceBlock) -> Vec<(String, WeightedHypergraph)> {
    (0..block.count)
        .map(|i| match materialize(block, i).unwrap() {
            (id, Problem::Matching(h)) => (id, h),
            _ => unreachable!(),
        })
        .collect()
}

pub fn vertex_graphs(block: &InstanceBlock) -> Vec<(String, VertexWeightedGraph)> {
    (0..block.count)
        .map(|i| match materialize(block, i).unwrap() {
            (id, Problem::IndependentSet(g)) => (id, g),
            _ => unreachable!(),
        })
        .collect()
}

pub const EPS_GRID: [f64; 3] = [1.0 / 20.0, 1.0 / 10.0, 1.0 / 5.0];

/// `a >= b` up to the 1e-9 relative slack used for every ratio check.
pub fn geq(a: f64, b: f64) -> bool {
    a >= b - 1e-9 * b.abs().max(a.abs())
}
