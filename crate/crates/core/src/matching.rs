use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{EdgeId, WeightedHypergraph};

/// Which shift and which large interval (1-based, heaviest first) selected an
/// edge inside the cascade.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub shift: usize,
    pub interval: usize,
}

/// A set of edge ids, iterated in ascending order, with an optional
/// provenance tag per edge.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Matching {
    entries: BTreeMap<EdgeId, Option<Provenance>>,
}

impl Matching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_ids(ids: impl IntoIterator<Item = EdgeId>) -> Self {
        Matching {
            entries: ids.into_iter().map(|id| (id, None)).collect(),
        }
    }

    /// Inserts `id`, replacing the tag if it is already present.
    pub fn insert(&mut self, id: EdgeId, provenance: Option<Provenance>) {
        self.entries.insert(id, provenance);
    }

    pub fn ids(&self) -> Vec<EdgeId> {
        self.entries.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, Option<Provenance>)> + '_ {
        self.entries.iter().map(|(&id, &p)| (id, p))
    }

    pub fn provenance(&self, id: EdgeId) -> Option<Provenance> {
        self.entries.get(&id).copied().flatten()
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        self.entries.contains_key(&id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reason a set of edge ids fails to be a matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownEdge(EdgeId),
    DuplicateEdge(EdgeId),
    VertexCoveredTwice(usize),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::UnknownEdge(id) => write!(f, "edge {id} does not exist"),
            Violation::DuplicateEdge(id) => write!(f, "edge {id} listed twice"),
            Violation::VertexCoveredTwice(v) => write!(f, "vertex {v} covered twice"),
        }
    }
}

pub fn find_violation(h: &WeightedHypergraph, ids: &[EdgeId]) -> Option<Violation> {
    let mut covered = vec![false; h.num_vertices()];
    let mut seen = std::collections::HashSet::with_capacity(ids.len());
    for &id in ids {
        if id >= h.num_edges() {
            return Some(Violation::UnknownEdge(id));
        }
        if !seen.insert(id) {
            return Some(Violation::DuplicateEdge(id));
        }
        for &v in h.edge(id).vertices() {
            if covered[v] {
                return Some(Violation::VertexCoveredTwice(v));
            }
            covered[v] = true;
        }
    }
    None
}

pub fn is_valid_matching(h: &WeightedHypergraph, ids: &[EdgeId]) -> bool {
    find_violation(h, ids).is_none()
}

/// Total weight of `m` under the weights of `h`.
pub fn matching_weight(h: &WeightedHypergraph, m: &Matching) -> Result<f64> {
    let ids = m.ids();
    if let Some(v) = find_violation(h, &ids) {
        return Err(Error::InvalidMatching(v.to_string()));
    }
    Ok(ids.iter().map(|&id| h.weight(id)).sum())
}
