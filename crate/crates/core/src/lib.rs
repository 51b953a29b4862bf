//! Approximate maximum weight matching in edge-weighted hypergraphs by
//! reduction to sub-instances with a bounded weight range.
//!
//! The pipeline clamps light edges and rescales weights into `[1, n/eps]`
//! ([`transform::clamp_rescale`]), rounds them down to powers of `1 + eps`
//! ([`transform::round_to_powers`]), splits the weight levels into blocks
//! and, for every shift, into gaps and large intervals
//! ([`partition::build_shift_partition`]), then solves the large intervals
//! heaviest first with a pluggable black box, discarding edges incident to
//! what was already matched ([`cascade::reduce_and_solve`]).
//!
//! ```
//! use mwm_reduce::{reduce_and_solve, GreedySolver, WeightedHypergraph};
//!
//! let h = WeightedHypergraph::from_graph_edges(4, &[(0, 1, 3.0), (1, 2, 5.0), (2, 3, 4.0)]).unwrap();
//! let result = reduce_and_solve(&h, 0.1, &GreedySolver).unwrap();
//! assert!(result.weight >= 5.0);
//! ```

pub mod cascade;
pub mod error;
pub mod experiment;
pub mod format;
pub mod generate;
pub mod instance;
pub mod matching;
pub mod mwis;
pub mod partition;
pub mod solvers;
pub mod transform;
pub mod verify;

pub use cascade::{reduce_and_solve, reduce_and_solve_with, run_shift, CascadeOptions, CascadeResult};
pub use error::{Error, Result};
pub use instance::{Edge, VertexWeightedGraph, WeightedHypergraph};
pub use matching::{is_valid_matching, matching_weight, Matching, Provenance};
pub use mwis::mwis_via_duality;
pub use solvers::{exact_matching_bruteforce, greedy_matching, solver_by_name, ExactSolver, GreedySolver, MatchingSolver};
