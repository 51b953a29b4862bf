//! Instance data model: edge-weighted hypergraphs (graphs are the `s = 2`
//! case) and vertex-weighted simple graphs for the independent set pipeline.

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    vertices: SmallVec<[VertexId; 4]>,
    weight: f64,
}

impl Edge {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>, weight: f64) -> Self {
        Edge {
            vertices: vertices.into_iter().collect(),
            weight,
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Hypergraph on vertices `0..n` whose edges have at most `s` vertices and a
/// finite weight `>= 1`. Edge ids are positions in the edge list.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedHypergraph {
    n: usize,
    s: usize,
    edges: Vec<Edge>,
}

impl WeightedHypergraph {
    pub fn new(n: usize, s: usize, edges: Vec<Edge>) -> Result<Self> {
        for (id, edge) in edges.iter().enumerate() {
            check_edge(n, s, edge).map_err(|msg| Error::InvalidInstance(format!("edge {id}: {msg}")))?;
        }
        Ok(WeightedHypergraph { n, s, edges })
    }

    /// Graph convenience constructor (`s = 2`).
    pub fn from_graph_edges(n: usize, edges: &[(VertexId, VertexId, f64)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&(u, v, w)| Edge::new(vec![u, v], w))
            .collect();
        Self::new(n, 2, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Declared bound on edge cardinality.
    pub fn max_edge_size(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn weight(&self, id: EdgeId) -> f64 {
        self.edges[id].weight
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    /// Largest edge weight, `None` for an edge-free instance.
    pub fn max_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).reduce(f64::max)
    }

    /// Same topology, new weights. Weights are validated.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidInstance(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| Edge {
                vertices: e.vertices.clone(),
                weight: w,
            })
            .collect();
        Self::new(self.n, self.s, edges)
    }

    /// Per-vertex lists of incident edge ids, each ascending.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            for &v in &e.vertices {
                inc[v].push(id);
            }
        }
        inc
    }
}

fn check_edge(n: usize, s: usize, edge: &Edge) -> std::result::Result<(), String> {
    if edge.vertices.is_empty() {
        return Err("edge has no vertices".into());
    }
    if edge.vertices.len() > s {
        return Err(format!("edge size {} exceeds s = {s}", edge.vertices.len()));
    }
    if !edge.weight.is_finite() || edge.weight < 1.0 {
        return Err(format!("weight {} is not a finite real >= 1", edge.weight));
    }
    for (i, &v) in edge.vertices.iter().enumerate() {
        if v >= n {
            return Err(format!("vertex id {v} >= n = {n}"));
        }
        if edge.vertices[..i].contains(&v) {
            return Err(format!("duplicate vertex {v}"));
        }
    }
    Ok(())
}

/// Simple undirected graph with positive integer vertex weights.
///
/// Edges keep their input order; that order supplies the vertex ids of the
/// dual hypergraph.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexWeightedGraph {
    weights: Vec<u64>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
}

impl VertexWeightedGraph {
    pub fn new(weights: Vec<u64>, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let n = weights.len();
        if let Some(v) = weights.iter().position(|&w| w == 0) {
            return Err(Error::InvalidInstance(format!("vertex {v} has weight 0")));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "graph edge {id} ({u}, {v}) has a vertex >= n = {n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!("graph edge {id} is a self-loop on {u}")));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::InvalidInstance(format!("graph edge {id} ({u}, {v}) is repeated")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(VertexWeightedGraph {
            weights,
            edges,
            adjacency,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, v: VertexId) -> u64 {
        self.weights[v]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_independent(&self, vertices: &[VertexId]) -> bool {
        self.independence_violation(vertices).is_none()
    }

    /// First problem found with `vertices` as an independent set, if any.
    pub fn independence_violation(&self, vertices: &[VertexId]) -> Option<String> {
        let n = self.num_vertices();
        let mut chosen = vec![false; n];
        for &v in vertices {
            if v >= n {
                return Some(format!("vertex {v} does not exist"));
            }
            if chosen[v] {
                return Some(format!("vertex {v} listed twice"));
            }
            chosen[v] = true;
        }
        self.edges
            .iter()
            .find(|&&(u, v)| chosen[u] && chosen[v])
            .map(|&(u, v)| format!("vertices {u} and {v} are adjacent"))
    }

    pub fn set_weight(&self, vertices: &[VertexId]) -> u64 {
        vertices.iter().map(|&v| self.weights[v]).sum()
    }
}
