//! Line-oriented text formats.
//!
//! Hypergraph instance:
//! ```text
//! h <n> <m> <s>
//! e <weight> <v1> ... <vk>        (exactly m lines, k <= s, weight >= 1)
//! ```
//! Vertex-weighted graph:
//! ```text
//! g <n> <m>
//! w <vertex> <int-weight>         (n lines)
//! d <u> <v>                       (m lines)
//! ```
//! Solutions: `value <total-weight>` followed by `m <edge-id>` lines for a
//! matching or `v <vertex>` lines for an independent set.
//!
//! Blank lines and lines starting with `#` or `c ` are ignored everywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instance::{Edge, VertexWeightedGraph, WeightedHypergraph};

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line == "c" || line.starts_with("c ") {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn field<T: FromStr>(line: usize, token: Option<&&str>, what: &str) -> Result<T> {
    let token = token.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    token
        .parse()
        .map_err(|_| Error::parse(line, format!("cannot parse {what} from `{token}`")))
}

fn parse_weight(line: usize, token: Option<&&str>) -> Result<f64> {
    let w: f64 = field(line, token, "weight")?;
    if !w.is_finite() {
        return Err(Error::parse(line, format!("weight {w} is not finite")));
    }
    if w < 1.0 {
        return Err(Error::parse(line, format!("weight {w} is below 1")));
    }
    Ok(w)
}

pub fn parse_instance(text: &str) -> Result<WeightedHypergraph> {
    let mut recs = records(text);
    let (hline, header) = recs.next().ok_or_else(|| Error::parse(1, "missing `h` header"))?;
    if header[0] != "h" || header.len() != 4 {
        return Err(Error::parse(hline, "expected header `h <n> <m> <s>`"));
    }
    let n: usize = field(hline, header.get(1), "n")?;
    let m: usize = field(hline, header.get(2), "m")?;
    let s: usize = field(hline, header.get(3), "s")?;

    let mut edges = Vec::with_capacity(m);
    for (line, rec) in recs {
        if rec[0] != "e" {
            return Err(Error::parse(line, format!("expected edge line `e ...`, found `{}`", rec[0])));
        }
        if edges.len() == m {
            return Err(Error::parse(line, format!("more than the declared {m} edges")));
        }
        let weight = parse_weight(line, rec.get(1))?;
        let mut vertices = Vec::with_capacity(rec.len().saturating_sub(2));
        for tok in &rec[2..] {
            let v: usize = field(line, Some(tok), "vertex id")?;
            if v >= n {
                return Err(Error::parse(line, format!("vertex id {v} >= n = {n}")));
            }
            if vertices.contains(&v) {
                return Err(Error::parse(line, format!("duplicate vertex {v} in edge")));
            }
            vertices.push(v);
        }
        if vertices.is_empty() {
            return Err(Error::parse(line, "edge has no vertices"));
        }
        if vertices.len() > s {
            return Err(Error::parse(
                line,
                format!("edge size {} exceeds declared s = {s}", vertices.len()),
            ));
        }
        edges.push(Edge::new(vertices, weight));
    }
    if edges.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    WeightedHypergraph::new(n, s, edges)
}

/// Weights are written in shortest round-trip form, so parsing the output
/// reproduces the instance exactly.
pub fn write_instance(h: &WeightedHypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "h {} {} {}", h.num_vertices(), h.num_edges(), h.max_edge_size()).unwrap();
    for e in h.edges() {
        write!(out, "e {}", e.weight()).unwrap();
        for v in e.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_vertex_weighted(text: &str) -> Result<VertexWeightedGraph> {
    let mut recs = records(text);
    let (gline, header) = recs.next().ok_or_else(|| Error::parse(1, "missing `g` header"))?;
    if header[0] != "g" || header.len() != 3 {
        return Err(Error::parse(gline, "expected header `g <n> <m>`"));
    }
    let n: usize = field(gline, header.get(1), "n")?;
    let m: usize = field(gline, header.get(2), "m")?;
    let mut weights: Vec<Option<u64>> = vec![None; n];
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (line, rec) in recs {
        match rec[0] {
            "w" if rec.len() == 3 => {
                let v: usize = field(line, rec.get(1), "vertex")?;
                let w: u64 = field(line, rec.get(2), "integer weight")?;
                if v >= n {
                    return Err(Error::parse(line, format!("vertex {v} >= n = {n}")));
                }
                if w == 0 {
                    return Err(Error::parse(line, "vertex weight must be >= 1"));
                }
                if weights[v].replace(w).is_some() {
                    return Err(Error::parse(line, format!("vertex {v} weighted twice")));
                }
            }
            "d" if rec.len() == 3 => {
                let u: usize = field(line, rec.get(1), "vertex")?;
                let v: usize = field(line, rec.get(2), "vertex")?;
                if u >= n || v >= n {
                    return Err(Error::parse(line, format!("edge ({u}, {v}) has a vertex >= n = {n}")));
                }
                if u == v {
                    return Err(Error::parse(line, format!("self-loop on {u}")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(Error::parse(line, format!("repeated edge ({u}, {v})")));
                }
                edges.push((u, v));
            }
            _ => return Err(Error::parse(line, "expected `w <vertex> <weight>` or `d <u> <v>`")),
        }
    }
    if edges.len() != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    let weights = weights
        .into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| Error::parse(text.lines().count().max(1), format!("vertex {v} has no weight line")))
        })
        .collect::<Result<Vec<_>>>()?;
    VertexWeightedGraph::new(weights, edges)
}

pub fn write_vertex_weighted(g: &VertexWeightedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "g {} {}", g.num_vertices(), g.num_edges()).unwrap();
    for (v, w) in g.weights().iter().enumerate() {
        writeln!(out, "w {v} {w}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "d {u} {v}").unwrap();
    }
    out
}

/// A solution file: declared value and the listed ids.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub kind: SolutionKind,
    pub value: f64,
    pub ids: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    /// `m <edge-id>` lines.
    Matching,
    /// `v <vertex>` lines.
    IndependentSet,
}

impl SolutionKind {
    fn tag(self) -> &'static str {
        match self {
            SolutionKind::Matching => "m",
            SolutionKind::IndependentSet => "v",
        }
    }
}

pub fn write_solution(kind: SolutionKind, value: f64, ids: &[usize]) -> String {
    let mut out = format!("value {value}\n");
    for id in ids {
        writeln!(out, "{} {id}", kind.tag()).unwrap();
    }
    out
}

/// Parses a solution file. A file with no id lines is read as a matching.
pub fn parse_solution(text: &str) -> Result<Solution> {
    let mut recs = records(text);
    let (vline, header) = recs.next().ok_or_else(|| Error::parse(1, "missing `value` line"))?;
    if header[0] != "value" || header.len() != 2 {
        return Err(Error::parse(vline, "expected `value <total-weight>`"));
    }
    let value: f64 = field(vline, header.get(1), "value")?;
    let mut kind = None;
    let mut ids = Vec::new();
    for (line, rec) in recs {
        let this = match rec[0] {
            "m" => SolutionKind::Matching,
            "v" => SolutionKind::IndependentSet,
            other => return Err(Error::parse(line, format!("unexpected record `{other}`"))),
        };
        if rec.len() != 2 {
            return Err(Error::parse(line, "expected exactly one id"));
        }
        if *kind.get_or_insert(this) != this {
            return Err(Error::parse(line, "mixed `m` and `v` records"));
        }
        ids.push(field(line, rec.get(1), "id")?);
    }
    Ok(Solution {
        kind: kind.unwrap_or(SolutionKind::Matching),
        value,
        ids,
    })
}
