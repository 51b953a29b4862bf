//! Cross-checks a solution file against its instance.

use crate::error::Result;
use crate::format::{parse_instance, parse_solution, parse_vertex_weighted, SolutionKind};
use crate::matching::find_violation;

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Ok { weight: f64 },
    Invalid(String),
    Mismatch { declared: f64, recomputed: f64 },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok { .. })
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Ok { weight } => write!(f, "OK, weight {weight}"),
            Verdict::Invalid(why) => write!(f, "INVALID: {why}"),
            Verdict::Mismatch { declared, recomputed } => {
                write!(f, "MISMATCH: declared {declared}, recomputed {recomputed}")
            }
        }
    }
}

const RELATIVE_SLACK: f64 = 1e-9;

fn compare(declared: f64, recomputed: f64) -> Verdict {
    if (declared - recomputed).abs() <= RELATIVE_SLACK * recomputed.abs().max(1.0) {
        Verdict::Ok { weight: recomputed }
    } else {
        Verdict::Mismatch { declared, recomputed }
    }
}

/// Checks a matching against an `h` instance or an independent set against
/// a `g` instance. Parse failures are errors; inconsistencies are verdicts.
pub fn verify(instance_text: &str, solution_text: &str) -> Result<Verdict> {
    let solution = parse_solution(solution_text)?;
    let is_vertex_graph = instance_text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#') && !l.starts_with("c "))
        .is_some_and(|l| l.starts_with("g "));

    if is_vertex_graph {
        let g = parse_vertex_weighted(instance_text)?;
        if solution.kind == SolutionKind::Matching && !solution.ids.is_empty() {
            return Ok(Verdict::Invalid(
                "vertex-weighted instance needs `v <vertex>` records".into(),
            ));
        }
        if let Some(why) = g.independence_violation(&solution.ids) {
            return Ok(Verdict::Invalid(why));
        }
        Ok(compare(solution.value, g.set_weight(&solution.ids) as f64))
    } else {
        let h = parse_instance(instance_text)?;
        if solution.kind == SolutionKind::IndependentSet {
            return Ok(Verdict::Invalid("hypergraph instance needs `m <edge-id>` records".into()));
        }
        if let Some(v) = find_violation(&h, &solution.ids) {
            return Ok(Verdict::Invalid(v.to_string()));
        }
        let weight: f64 = solution.ids.iter().map(|&id| h.weight(id)).sum();
        Ok(compare(solution.value, weight))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATH: &str = "h 5 3 2\ne 3 0 1\ne 5 1 2\ne 4 2 3\n";

    #[test]
    fn accepts_consistent_pair() {
        let v = verify(PATH, "value 7\nm 0\nm 2\n").unwrap();
        assert_eq!(v.to_string(), "OK, weight 7");
    }

    #[test]
    fn reports_overlap() {
        let star = "h 5 2 2\ne 3 3 1\ne 5 3 2\n";
        let v = verify(star, "value 8\nm 0\nm 1\n").unwrap();
        assert_eq!(v.to_string(), "INVALID: vertex 3 covered twice");
        assert!(!v.is_ok());
    }

    #[test]
    fn reports_mismatch() {
        let v = verify(PATH, "value 9\nm 0\nm 2\n").unwrap();
        assert!(v.to_string().starts_with("MISMATCH"));
    }

    #[test]
    fn unknown_edge_is_invalid() {
        let v = verify(PATH, "value 1\nm 9\n").unwrap();
        assert_eq!(v.to_string(), "INVALID: edge 9 does not exist");
    }

    #[test]
    fn independent_sets() {
        let g = "g 3 2\nw 0 2\nw 1 3\nw 2 4\nd 0 1\nd 1 2\n";
        assert!(verify(g, "value 6\nv 0\nv 2\n").unwrap().is_ok());
        assert_eq!(
            verify(g, "value 5\nv 0\nv 1\n").unwrap().to_string(),
            "INVALID: vertices 0 and 1 are adjacent"
        );
        assert!(!verify(g, "value 6\nm 0\n").unwrap().is_ok());
        assert!(verify(g, "value 0\n").unwrap().is_ok());
    }

    #[test]
    fn parse_errors_propagate() {
        assert!(verify(PATH, "val 7").is_err());
        assert!(verify("h 2 1 2\ne 0.1 0 1", "value 0").is_err());
    }
}
