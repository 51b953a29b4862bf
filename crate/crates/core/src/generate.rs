//! Seeded random instances. The same spec always yields the same instance.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Edge, VertexWeightedGraph, WeightedHypergraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    Graph,
    Hypergraph,
    Bipartite,
}

impl FromStr for InstanceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "graph" => Ok(InstanceKind::Graph),
            "hypergraph" => Ok(InstanceKind::Hypergraph),
            "bipartite" => Ok(InstanceKind::Bipartite),
            other => Err(format!("unknown instance kind `{other}` (graph|hypergraph|bipartite)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightDist {
    Uniform { lo: f64, hi: f64 },
    /// Pareto with tail exponent `alpha`, truncated to `[1, max]`.
    PowerLaw { alpha: f64, max: f64 },
}

impl WeightDist {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            WeightDist::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo >= 1.0 && hi >= lo,
            WeightDist::PowerLaw { alpha, max } => alpha.is_finite() && alpha > 0.0 && max.is_finite() && max >= 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Generate(format!("bad weight distribution {self}")))
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        match *self {
            WeightDist::Uniform { lo, hi } => (lo + (hi - lo) * u).clamp(lo, hi),
            WeightDist::PowerLaw { alpha, max } => {
                let tail = max.powf(-alpha);
                (1.0 - u * (1.0 - tail)).powf(-1.0 / alpha).clamp(1.0, max)
            }
        }
    }
}

impl fmt::Display for WeightDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightDist::Uniform { lo, hi } => write!(f, "uniform({lo},{hi})"),
            WeightDist::PowerLaw { alpha, max } => write!(f, "powerlaw({alpha},{max})"),
        }
    }
}

impl FromStr for WeightDist {
    type Err = String;

    /// `uniform(lo,hi)` or `powerlaw(alpha,max)`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| format!("bad weight distribution `{s}`"))?;
        let name = &s[..open];
        let args = s[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| format!("bad weight distribution `{s}`"))?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|_| format!("bad number `{a}` in `{s}`")))
            .collect::<std::result::Result<_, _>>()?;
        match (name, nums.as_slice()) {
            ("uniform", &[lo, hi]) => Ok(WeightDist::Uniform { lo, hi }),
            ("powerlaw", &[alpha, max]) => Ok(WeightDist::PowerLaw { alpha, max }),
            _ => Err(format!("bad weight distribution `{s}` (uniform(lo,hi) or powerlaw(alpha,max))")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub kind: InstanceKind,
    pub n: usize,
    pub m: usize,
    /// Maximum edge size (hypergraphs only).
    pub s: usize,
    pub weights: WeightDist,
    pub seed: u64,
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) as u128 {
        acc = acc.saturating_mul(n as u128 - i) / (i + 1);
    }
    if k > n {
        0
    } else {
        acc
    }
}

/// Distinct random vertex sets drawn by `draw`, with full enumeration when
/// the request is dense.
fn distinct_sets<R: Rng>(
    rng: &mut R,
    m: usize,
    possible: u128,
    enumerate: impl Fn() -> Vec<Vec<usize>>,
    mut draw: impl FnMut(&mut R) -> Vec<usize>,
) -> Vec<Vec<usize>> {
    if 2 * m as u128 > possible {
        let mut all = enumerate();
        all.shuffle(rng);
        all.truncate(m);
        return all;
    }
    let mut seen = HashSet::with_capacity(m);
    let mut out = Vec::with_capacity(m);
    while out.len() < m {
        let mut set = draw(rng);
        set.sort_unstable();
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    out
}

pub fn generate_instance(spec: &GenSpec) -> Result<WeightedHypergraph> {
    spec.weights.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let (s, sets) = match spec.kind {
        InstanceKind::Graph => {
            let possible = binomial(n, 2);
            if spec.m as u128 > possible {
                return Err(Error::Generate(format!(
                    "a simple graph on {n} vertices has at most {possible} edges, {} requested",
                    spec.m
                )));
            }
            let sets = distinct_sets(
                &mut rng,
                spec.m,
                possible,
                || (0..n).flat_map(|u| (u + 1..n).map(move |v| vec![u, v])).collect(),
                |r| {
                    let u = r.random_range(0..n);
                    let mut v = r.random_range(0..n - 1);
                    if v >= u {
                        v += 1;
                    }
                    vec![u, v]
                },
            );
            (2, sets)
        }
        InstanceKind::Bipartite => {
            let left = n / 2;
            let right = n - left;
            let possible = (left * right) as u128;
            if spec.m as u128 > possible {
                return Err(Error::Generate(format!(
                    "a bipartite graph with sides {left} and {right} has at most {possible} edges, {} requested",
                    spec.m
                )));
            }
            let sets = distinct_sets(
                &mut rng,
                spec.m,
                possible,
                || (0..left).flat_map(|u| (left..n).map(move |v| vec![u, v])).collect(),
                |r| vec![r.random_range(0..left), r.random_range(left..n)],
            );
            (2, sets)
        }
        InstanceKind::Hypergraph => {
            if spec.s == 0 {
                return Err(Error::Generate("edge size bound s must be >= 1".into()));
            }
            let lo = 2.min(spec.s);
            let hi = spec.s.min(n);
            if hi < lo {
                return Err(Error::Generate(format!("cannot form edges of size {lo}..={} on {n} vertices", spec.s)));
            }
            let possible = (lo..=hi).map(|k| binomial(n, k)).fold(0u128, u128::saturating_add);
            if spec.m as u128 > possible {
                return Err(Error::Generate(format!(
                    "only {possible} distinct edges of size {lo}..={hi} exist on {n} vertices, {} requested",
                    spec.m
                )));
            }
            let all_vertices: Vec<usize> = (0..n).collect();
            let sets = distinct_sets(
                &mut rng,
                spec.m,
                possible,
                || {
                    (lo..=hi)
                        .flat_map(|k| subsets_of_size(n, k))
                        .collect()
                },
                |r| {
                    let k = r.random_range(lo..=hi);
                    all_vertices.choose_multiple(r, k).copied().collect()
                },
            );
            (spec.s, sets)
        }
    };
    let edges = sets
        .into_iter()
        .map(|vs| Edge::new(vs, spec.weights.sample(&mut rng)))
        .collect();
    WeightedHypergraph::new(n, s, edges)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexGraphSpec {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub max_weight: u64,
    pub seed: u64,
    /// Fail when fewer than `m` edges fit; otherwise keep what was placed.
    pub strict: bool,
}

/// Random simple graph with `m` edges, degrees at most `max_degree` and
/// integer weights uniform in `1..=max_weight`.
pub fn generate_vertex_weighted(spec: &VertexGraphSpec) -> Result<VertexWeightedGraph> {
    if spec.max_weight == 0 {
        return Err(Error::Generate("max_weight must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let weights: Vec<u64> = (0..n).map(|_| rng.random_range(1..=spec.max_weight)).collect();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(&mut rng);
    let mut degree = vec![0; n];
    let mut edges = Vec::with_capacity(spec.m);
    for (u, v) in pairs {
        if edges.len() == spec.m {
            break;
        }
        if degree[u] < spec.max_degree && degree[v] < spec.max_degree {
            degree[u] += 1;
            degree[v] += 1;
            edges.push((u, v));
        }
    }
    if spec.strict && edges.len() < spec.m {
        return Err(Error::Generate(format!(
            "placed only {} of {} edges on {n} vertices with max degree {}",
            edges.len(),
            spec.m,
            spec.max_degree
        )));
    }
    VertexWeightedGraph::new(weights, edges)
}
