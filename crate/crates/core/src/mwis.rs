//! Maximum weight independent set through the dual hypergraph.
//!
//! Independent sets of a graph correspond to matchings of the hypergraph that
//! has one vertex per graph edge and one hyperedge per graph vertex (its set
//! of incident edges). The cascade runs on that dual; the `dup-greedy` black
//! box additionally turns each weighted sub-instance into an unweighted one
//! by vertex duplication and runs a minimum-degree greedy independent set.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::cascade::{reduce_and_solve_with, CascadeOptions, CascadeResult};
use crate::error::{Error, Result};
use crate::instance::{Edge, VertexId, VertexWeightedGraph, WeightedHypergraph};
use crate::matching::{find_violation, Matching};
use crate::solvers::{solver_by_name, MatchingSolver};
use crate::transform::{integerize, unit_denominator};

pub const DEFAULT_DUPLICATION_CAP: u64 = 100_000;

/// Dual hypergraph of `g`. Hyperedge `v` holds the ids of `v`'s incident
/// graph edges and weighs `w(v)`; an isolated vertex gets a private dummy
/// vertex (ids `m, m+1, ...`) so it stays selectable.
pub fn dual_hypergraph(g: &VertexWeightedGraph) -> WeightedHypergraph {
    let m = g.num_edges();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.num_vertices()];
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(id);
        incident[v].push(id);
    }
    let mut next_dummy = m;
    let edges = incident
        .into_iter()
        .enumerate()
        .map(|(v, mut vs)| {
            if vs.is_empty() {
                vs.push(next_dummy);
                next_dummy += 1;
            }
            Edge::new(vs, g.weight(v) as f64)
        })
        .collect();
    WeightedHypergraph::new(next_dummy, g.max_degree().max(1), edges)
        .expect("dual of a valid graph is valid")
}

/// Graph vertices whose hyperedges `matching` selects in the dual of `g`.
pub fn matching_to_independent_set(g: &VertexWeightedGraph, matching: &Matching) -> Result<Vec<VertexId>> {
    let dual = dual_hypergraph(g);
    let ids = matching.ids();
    if let Some(v) = find_violation(&dual, &ids) {
        return Err(Error::InvalidMatching(format!("not a matching of the dual hypergraph: {v}")));
    }
    Ok(ids)
}

/// Unweighted graph with one copy per unit of vertex weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuplicatedGraph {
    pub adjacency: Vec<Vec<usize>>,
    /// Original vertex of each copy.
    pub copy_of: Vec<VertexId>,
    /// Copy ids of each original vertex.
    pub copies: Vec<Range<usize>>,
}

impl DuplicatedGraph {
    /// Original vertices with at least one selected copy, ascending.
    pub fn pull_back(&self, copies: &[usize]) -> Vec<VertexId> {
        copies
            .iter()
            .map(|&c| self.copy_of[c])
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }
}

fn check_duplication_cap(weights: &[u64], cap: u64) -> Result<u64> {
    let total: u64 = weights.iter().sum();
    if total > cap {
        return Err(Error::CapExceeded(format!(
            "vertex duplication would create {total} copies (cap {cap}); \
             large weights blow the graph up, use a larger eps or a smaller instance"
        )));
    }
    Ok(total)
}

/// Replaces every vertex `v` with `w(v)` mutually non-adjacent copies and
/// joins each copy to every copy of every neighbor. Refused when the total
/// weight exceeds `cap`.
pub fn duplicate_vertices(g: &VertexWeightedGraph, cap: u64) -> Result<DuplicatedGraph> {
    let total = check_duplication_cap(g.weights(), cap)?;
    let mut copies = Vec::with_capacity(g.num_vertices());
    let mut copy_of = Vec::with_capacity(total as usize);
    for v in 0..g.num_vertices() {
        let start = copy_of.len();
        copy_of.extend(std::iter::repeat_n(v, g.weight(v) as usize));
        copies.push(start..copy_of.len());
    }
    let adjacency = copy_of
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .flat_map(|&u| copies[u].clone())
                .collect()
        })
        .collect();
    Ok(DuplicatedGraph {
        adjacency,
        copy_of,
        copies,
    })
}

/// Minimum-degree greedy: take a vertex of least residual degree (lowest id
/// on ties), delete it with its neighbors, repeat. The result is a maximal
/// independent set, ascending.
pub fn greedy_mis(adjacency: &[Vec<usize>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut degree: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
    let mut chosen = Vec::new();

    while let Some((_, v)) = queue.pop_first() {
        chosen.push(v);
        alive[v] = false;
        for &u in &adjacency[v] {
            if !alive[u] {
                continue;
            }
            alive[u] = false;
            queue.remove(&(degree[u], u));
            for &t in &adjacency[u] {
                if alive[t] {
                    queue.remove(&(degree[t], t));
                    degree[t] -= 1;
                    queue.insert((degree[t], t));
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// [`greedy_mis`] on the duplicated graph of `g`, pulled back to `g`,
/// computed without building the duplicated graph.
///
/// All copies of a vertex share their neighborhood, so they die together, and
/// once one copy is taken the rest have no live neighbors. A copy's degree is
/// the total weight of the live neighbors of its vertex and lower vertices own
/// lower copy ids, so the run reduces to repeatedly taking the live vertex
/// with the least live neighbor weight (lowest id on ties).
pub fn duplicated_greedy_mis(g: &VertexWeightedGraph) -> Vec<VertexId> {
    let n = g.num_vertices();
    let mut load: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| g.weight(u)).sum())
        .collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(u64, VertexId)> = (0..n).map(|v| (load[v], v)).collect();
    let mut chosen = Vec::new();

    while let Some((_, v)) = queue.pop_first() {
        chosen.push(v);
        alive[v] = false;
        for &u in g.neighbors(v) {
            if !alive[u] {
                continue;
            }
            alive[u] = false;
            queue.remove(&(load[u], u));
            for &t in g.neighbors(u) {
                if alive[t] {
                    queue.remove(&(load[t], t));
                    load[t] -= g.weight(u);
                    queue.insert((load[t], t));
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Conflict graph of a hypergraph: one vertex per edge (weighted by the
/// integer weight), adjacent when the edges intersect.
pub fn conflict_graph(h: &WeightedHypergraph, integer_weights: &[u64]) -> VertexWeightedGraph {
    let mut pairs = BTreeSet::new();
    for inc in h.incidence() {
        for (i, &a) in inc.iter().enumerate() {
            for &b in &inc[i + 1..] {
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    VertexWeightedGraph::new(integer_weights.to_vec(), pairs.into_iter().collect())
        .expect("conflict graph is simple")
}

/// Black box built from an unweighted independent set heuristic: integerize
/// the weights, read the sub-instance as a vertex-weighted conflict graph,
/// duplicate vertices, run [`greedy_mis`], pull back.
#[derive(Clone, Copy, Debug)]
pub struct DupGreedySolver {
    pub eps: f64,
    pub cap: u64,
}

impl DupGreedySolver {
    pub fn new(eps: f64) -> Result<Self> {
        if unit_denominator(eps).is_none() {
            return Err(Error::Epsilon {
                eps,
                reason: "dup-greedy integerizes with denominator 1/eps, which must be an integer".into(),
            });
        }
        Ok(DupGreedySolver {
            eps,
            cap: DEFAULT_DUPLICATION_CAP,
        })
    }
}

impl MatchingSolver for DupGreedySolver {
    fn name(&self) -> &str {
        "dup-greedy"
    }

    /// No a-priori factor: it depends on the degree of the duplicated graph.
    fn alpha(&self, _s: usize) -> Option<f64> {
        None
    }

    fn solve(&self, h: &WeightedHypergraph, _weight_bound: f64) -> Result<Matching> {
        let (lifted, _) = integerize(h, self.eps)?;
        let weights: Vec<u64> = lifted.weights().iter().map(|&w| w as u64).collect();
        let conflicts = conflict_graph(h, &weights);
        check_duplication_cap(&weights, self.cap)?;
        Ok(Matching::from_ids(duplicated_greedy_mis(&conflicts)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MwisResult {
    pub vertices: Vec<VertexId>,
    pub weight: u64,
    pub cascade: CascadeResult,
}

pub fn mwis_via_duality(g: &VertexWeightedGraph, eps: f64, solver: &str) -> Result<MwisResult> {
    mwis_via_duality_with(g, eps, solver, CascadeOptions::default())
}

pub fn mwis_via_duality_with(
    g: &VertexWeightedGraph,
    eps: f64,
    solver: &str,
    options: CascadeOptions,
) -> Result<MwisResult> {
    let snapped = crate::transform::snap_eps(eps)?;
    let black_box = solver_by_name(solver, snapped)?;
    let dual = dual_hypergraph(g);
    let (cascade, _) = reduce_and_solve_with(&dual, snapped, black_box.as_ref(), options)?;
    let vertices = matching_to_independent_set(g, &cascade.best)?;
    debug_assert!(g.is_independent(&vertices));
    Ok(MwisResult {
        weight: g.set_weight(&vertices),
        vertices,
        cascade,
    })
}
