//! The shifted-interval cascade.
//!
//! For every shift `x` the large intervals are solved heaviest first with the
//! black-box solver; after each sub-solve every residual edge touching a
//! matched vertex is dropped. The union over intervals is the shift's
//! matching and the heaviest shift matching (under the input weights) wins.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Edge, EdgeId, WeightedHypergraph};
use crate::matching::{find_violation, matching_weight, Matching, Provenance};
use crate::partition::{build_shift_partition, compute_params, weight_levels, CascadeParams, ShiftPartition};
use crate::solvers::MatchingSolver;
use crate::transform::{clamp_rescale, level_weight, round_to_powers, snap_eps, RoundedInstance};

/// One sub-solve of the cascade.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalTrace {
    pub x: usize,
    pub j: usize,
    pub level_hi: u32,
    pub level_lo: u32,
    pub sub_vertices: usize,
    pub sub_edges: usize,
    pub matched: usize,
    /// Sub-matching weight in the solver's rescaled weights.
    pub solver_weight: f64,
    /// Sub-matching weight under the scoring weights.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOutcome {
    pub x: usize,
    pub matching: Matching,
    /// Weight under the input (original) weights.
    pub weight: f64,
    /// Weight under the rounded weights `(1 + eps)^e`.
    pub rounded_weight: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransformTrace {
    pub requested_eps: f64,
    /// Unit fraction actually used.
    pub eps: f64,
    /// Multiplier applied by the clamp-and-rescale step (1 if skipped).
    pub clamp_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CascadeResult {
    pub best: Matching,
    pub best_shift: usize,
    pub weight: f64,
    pub per_shift: Vec<ShiftOutcome>,
    pub params: CascadeParams,
    pub transform: TransformTrace,
    pub trace: Vec<IntervalTrace>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub transform: Duration,
    pub partition: Duration,
    pub solve: Duration,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CascadeOptions {
    /// Evaluate shifts on the rayon pool.
    pub parallel: bool,
}

/// Shift-independent indexes over a rounded instance. Edges are stored in
/// cascade order with their vertex lists laid out contiguously.
struct LevelIndex<'a> {
    r: &'a RoundedInstance,
    /// Edge ids by exponent descending, then scoring weight descending, then
    /// id ascending. Sub-instances list their edges in this order.
    order: Vec<EdgeId>,
    /// Exponent of `order[i]`.
    levels: Vec<u32>,
    /// Vertices of `order[i]` are `vertices[offsets[i]..offsets[i + 1]]`.
    offsets: Vec<usize>,
    vertices: Vec<usize>,
}

impl<'a> LevelIndex<'a> {
    fn new(r: &'a RoundedInstance) -> Self {
        let mut order: Vec<EdgeId> = (0..r.exponents.len()).collect();
        let w = &r.original_weights;
        order.sort_by(|&a, &b| {
            r.exponents[b]
                .cmp(&r.exponents[a])
                .then(w[b].total_cmp(&w[a]))
                .then(a.cmp(&b))
        });
        let levels = order.iter().map(|&id| r.exponents[id]).collect();
        let mut offsets = Vec::with_capacity(order.len() + 1);
        let mut vertices = Vec::new();
        offsets.push(0);
        for &id in &order {
            vertices.extend_from_slice(r.base.edge(id).vertices());
            offsets.push(vertices.len());
        }
        LevelIndex {
            r,
            order,
            levels,
            offsets,
            vertices,
        }
    }

    fn edge_vertices(&self, pos: usize) -> &[usize] {
        &self.vertices[self.offsets[pos]..self.offsets[pos + 1]]
    }

    /// Positions in `order` whose level lies in `[lo, hi]`.
    fn range(&self, hi: u32, lo: u32) -> std::ops::Range<usize> {
        let start = self.levels.partition_point(|&e| e > hi);
        let end = self.levels.partition_point(|&e| e >= lo);
        start..end
    }

    fn run(
        &self,
        p: &ShiftPartition,
        solver: &dyn MatchingSolver,
    ) -> Result<(Matching, Vec<IntervalTrace>)> {
        let r = self.r;
        let h = &r.base;
        // an edge is still alive iff none of its vertices is matched
        let mut matched = vec![false; h.num_vertices()];
        let mut local_of = vec![usize::MAX; h.num_vertices()];
        let mut result = Matching::new();
        let mut trace = Vec::with_capacity(p.intervals.len());

        for (idx, interval) in p.intervals.iter().enumerate() {
            let j = idx + 1;
            let offered: Vec<usize> = self
                .range(interval.hi, interval.lo)
                .filter(|&pos| self.edge_vertices(pos).iter().all(|&v| !matched[v]))
                .collect();
            // positions are sorted by level descending
            let (max_level, min_level) = match (offered.first(), offered.last()) {
                (Some(&first), Some(&last)) => (self.levels[first], self.levels[last]),
                _ => continue,
            };

            // compact the touched vertices
            let mut touched = Vec::new();
            let mut edges = Vec::with_capacity(offered.len());
            for &pos in &offered {
                let vs = self.edge_vertices(pos).iter().map(|&v| {
                    if local_of[v] == usize::MAX {
                        local_of[v] = touched.len();
                        touched.push(v);
                    }
                    local_of[v]
                });
                edges.push(Edge::new(vs, level_weight(r.eps, self.levels[pos] - min_level)));
            }
            for &v in &touched {
                local_of[v] = usize::MAX;
            }
            let sub = WeightedHypergraph::new(touched.len(), h.max_edge_size(), edges)?;
            let bound = level_weight(r.eps, max_level - min_level);

            let sub_matching = solver.solve(&sub, bound)?;
            let local_ids = sub_matching.ids();
            if let Some(v) = find_violation(&sub, &local_ids) {
                return Err(Error::SolverOutput {
                    solver: solver.name().to_string(),
                    context: format!(
                        "shift {} interval {j} ({} vertices, {} edges)",
                        p.x,
                        sub.num_vertices(),
                        sub.num_edges()
                    ),
                    detail: v.to_string(),
                });
            }

            let mut solver_weight = 0.0;
            let mut weight = 0.0;
            for &local in &local_ids {
                let pos = offered[local];
                let id = self.order[pos];
                solver_weight += sub.weight(local);
                weight += r.original_weights[id];
                result.insert(id, Some(Provenance { shift: p.x, interval: j }));
                for &v in self.edge_vertices(pos) {
                    matched[v] = true;
                }
            }
            trace.push(IntervalTrace {
                x: p.x,
                j,
                level_hi: interval.hi,
                level_lo: interval.lo,
                sub_vertices: sub.num_vertices(),
                sub_edges: sub.num_edges(),
                matched: local_ids.len(),
                solver_weight,
                weight,
            });
        }
        Ok((result, trace))
    }
}

/// Runs the cascade for a single shift partition of `r`.
pub fn run_shift(r: &RoundedInstance, p: &ShiftPartition, solver: &dyn MatchingSolver) -> Result<Matching> {
    run_shift_traced(r, p, solver).map(|(m, _)| m)
}

pub fn run_shift_traced(
    r: &RoundedInstance,
    p: &ShiftPartition,
    solver: &dyn MatchingSolver,
) -> Result<(Matching, Vec<IntervalTrace>)> {
    LevelIndex::new(r).run(p, solver)
}

/// Clamps, rounds, and runs every shift; returns the heaviest shift matching
/// scored with the weights of `h`.
pub fn reduce_and_solve(h: &WeightedHypergraph, eps: f64, solver: &dyn MatchingSolver) -> Result<CascadeResult> {
    reduce_and_solve_with(h, eps, solver, CascadeOptions::default()).map(|(r, _)| r)
}

/// The rounded instance the cascade works on: clamped and rescaled weights
/// rounded to powers of `1 + eps`, scored with the weights of `h`.
pub fn prepare(h: &WeightedHypergraph, eps: f64) -> Result<(RoundedInstance, TransformTrace)> {
    let snapped = snap_eps(eps)?;
    let (clamped, clamp_scale) = clamp_rescale(h, snapped)?;
    let mut rounded = round_to_powers(&clamped, snapped)?;
    rounded.original_weights = h.weights();
    Ok((
        rounded,
        TransformTrace {
            requested_eps: eps,
            eps: snapped,
            clamp_scale,
        },
    ))
}

pub fn reduce_and_solve_with(
    h: &WeightedHypergraph,
    eps: f64,
    solver: &dyn MatchingSolver,
    options: CascadeOptions,
) -> Result<(CascadeResult, PhaseTimings)> {
    let t0 = Instant::now();
    let (rounded, transform) = prepare(h, eps)?;
    let t1 = Instant::now();

    let params = compute_params(transform.eps, h.max_edge_size())?;
    let levels = weight_levels(&rounded);
    let partitions: Vec<ShiftPartition> = (0..params.k)
        .map(|x| build_shift_partition(&levels, &params, x))
        .collect();
    let index = LevelIndex::new(&rounded);
    let t2 = Instant::now();

    let run = |p: &ShiftPartition| index.run(p, solver);
    let outcomes: Vec<Result<(Matching, Vec<IntervalTrace>)>> = if options.parallel {
        partitions.par_iter().map(run).collect()
    } else {
        partitions.iter().map(run).collect()
    };
    let t3 = Instant::now();

    let rounded_h = rounded.rounded_hypergraph();
    let mut per_shift = Vec::with_capacity(params.k);
    let mut trace = Vec::new();
    for (x, outcome) in outcomes.into_iter().enumerate() {
        let (matching, shift_trace) = outcome?;
        let weight = matching_weight(h, &matching)?;
        let rounded_weight = matching_weight(&rounded_h, &matching)?;
        trace.extend(shift_trace);
        per_shift.push(ShiftOutcome {
            x,
            matching,
            weight,
            rounded_weight,
        });
    }

    let mut best_shift = 0;
    for (x, outcome) in per_shift.iter().enumerate() {
        if outcome.weight > per_shift[best_shift].weight {
            best_shift = x;
        }
    }
    let result = CascadeResult {
        best: per_shift[best_shift].matching.clone(),
        best_shift,
        weight: per_shift[best_shift].weight,
        per_shift,
        params,
        transform,
        trace,
    };
    let timings = PhaseTimings {
        transform: t1 - t0,
        partition: t2 - t1,
        solve: t3 - t2,
    };
    Ok((result, timings))
}
