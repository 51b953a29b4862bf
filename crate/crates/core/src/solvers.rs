//! Black-box matching solvers plugged into the cascade.

use crate::error::{Error, Result};
use crate::instance::WeightedHypergraph;
use crate::matching::Matching;
use crate::mwis::DupGreedySolver;

pub const DEFAULT_EXACT_CAP: usize = 20;

/// Names accepted by [`solver_by_name`].
pub const SOLVER_NAMES: &[&str] = &["greedy", "exact", "dup-greedy"];

/// A maximum weight matching algorithm used as a black box.
///
/// `solve` receives a hypergraph whose weights lie in `[1, weight_bound]` and
/// returns edge ids of that hypergraph. Callers validate the output; the
/// claimed factor is only reported.
pub trait MatchingSolver: Send + Sync {
    fn name(&self) -> &str;

    /// Claimed approximation factor for edges of size at most `s`, if any.
    fn alpha(&self, s: usize) -> Option<f64>;

    fn solve(&self, h: &WeightedHypergraph, weight_bound: f64) -> Result<Matching>;
}

/// Heaviest-first greedy; ties go to the lowest edge id.
pub fn greedy_matching(h: &WeightedHypergraph) -> Matching {
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    order.sort_by(|&a, &b| h.weight(b).total_cmp(&h.weight(a)).then(a.cmp(&b)));
    let mut covered = vec![false; h.num_vertices()];
    let mut m = Matching::new();
    for id in order {
        let vs = h.edge(id).vertices();
        if vs.iter().all(|&v| !covered[v]) {
            for &v in vs {
                covered[v] = true;
            }
            m.insert(id, None);
        }
    }
    m
}

/// Exhaustive branch and bound over edge subsets in id order. Among optimal
/// matchings the lexicographically smallest id set wins. Refuses instances
/// with more than `cap` edges.
pub fn exact_matching_bruteforce(h: &WeightedHypergraph, cap: usize) -> Result<Matching> {
    let m = h.num_edges();
    if m > cap {
        return Err(Error::SolverRefused {
            solver: "exact".into(),
            reason: format!("{m} edges exceed the brute-force cap of {cap}"),
        });
    }
    let mut suffix = vec![0.0; m + 1];
    for id in (0..m).rev() {
        suffix[id] = suffix[id + 1] + h.weight(id);
    }
    let mut search = Search {
        h,
        suffix: &suffix,
        covered: vec![false; h.num_vertices()],
        current: Vec::new(),
        best: Vec::new(),
        best_weight: 0.0,
    };
    search.run(0, 0.0);
    Ok(Matching::from_ids(search.best))
}

struct Search<'a> {
    h: &'a WeightedHypergraph,
    suffix: &'a [f64],
    covered: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_weight: f64,
}

impl Search<'_> {
    fn run(&mut self, next: usize, weight: f64) {
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best.clone_from(&self.current);
        }
        if next == self.h.num_edges() || weight + self.suffix[next] <= self.best_weight {
            return;
        }
        let vs = self.h.edge(next).vertices();
        if vs.iter().all(|&v| !self.covered[v]) {
            for &v in vs {
                self.covered[v] = true;
            }
            self.current.push(next);
            self.run(next + 1, weight + self.h.weight(next));
            self.current.pop();
            for &v in self.h.edge(next).vertices() {
                self.covered[v] = false;
            }
        }
        self.run(next + 1, weight);
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GreedySolver;

impl MatchingSolver for GreedySolver {
    fn name(&self) -> &str {
        "greedy"
    }

    fn alpha(&self, s: usize) -> Option<f64> {
        Some(1.0 / s.max(2) as f64)
    }

    fn solve(&self, h: &WeightedHypergraph, _weight_bound: f64) -> Result<Matching> {
        Ok(greedy_matching(h))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExactSolver {
    pub cap: usize,
}

impl Default for ExactSolver {
    fn default() -> Self {
        ExactSolver {
            cap: DEFAULT_EXACT_CAP,
        }
    }
}

impl MatchingSolver for ExactSolver {
    fn name(&self) -> &str {
        "exact"
    }

    fn alpha(&self, _s: usize) -> Option<f64> {
        Some(1.0)
    }

    fn solve(&self, h: &WeightedHypergraph, _weight_bound: f64) -> Result<Matching> {
        exact_matching_bruteforce(h, self.cap)
    }
}

/// Looks a solver up by name. `eps` parameterizes solvers that integerize
/// their input (`dup-greedy`).
pub fn solver_by_name(name: &str, eps: f64) -> Result<Box<dyn MatchingSolver>> {
    match name {
        "greedy" => Ok(Box::new(GreedySolver)),
        "exact" => Ok(Box::new(ExactSolver::default())),
        "dup-greedy" => Ok(Box::new(DupGreedySolver::new(eps)?)),
        other => Err(Error::UnknownSolver(other.to_string())),
    }
}
