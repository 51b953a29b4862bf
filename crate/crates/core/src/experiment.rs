//! Experiment configs, the row runner, and CSV reporting.
//!
//! Config syntax, one `key = value` per line, `#` comments:
//!
//! ```text
//! eps = 0.05, 0.1, 0.2
//! solvers = exact, greedy
//! oracle_cap = 20        # brute-force OPT when the (dual) instance has <= cap edges
//! repeats = 5            # timed runs per row, after one untimed warm-up
//! timing = true          # false leaves the *_us columns empty
//! jobs = 1
//!
//! [instance]
//! id = small
//! kind = graph           # graph | bipartite | hypergraph | vwgraph | file
//! n = 4..10              # ranges are inclusive and sampled per instance
//! m = 1..20              # clipped to what n (and s, max_degree) allow
//! weights = uniform(1, 1000000)
//! seed = 100
//! count = 200            # ids small-0 .. small-199, seeds 100 .. 299
//! ```
//!
//! `hypergraph` blocks take `s`; `vwgraph` blocks take `max_degree` and
//! `max_weight` and run the independent set pipeline; `file` blocks take
//! `path` (relative to the config file) and infer the problem from the header.

use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cascade::{reduce_and_solve_with, CascadeOptions, PhaseTimings};
use crate::error::{Error, Result};
use crate::format::{parse_instance, parse_vertex_weighted};
use crate::generate::{
    generate_instance, generate_vertex_weighted, GenSpec, InstanceKind, VertexGraphSpec, WeightDist,
};
use crate::instance::{VertexWeightedGraph, WeightedHypergraph};
use crate::matching::matching_weight;
use crate::mwis::dual_hypergraph;
use crate::solvers::{exact_matching_bruteforce, greedy_matching, solver_by_name, SOLVER_NAMES};
use crate::transform::snap_eps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad integer `{t}`"));
        match s.split_once("..") {
            Some((a, b)) => {
                let (lo, hi) = (num(a)?, num(b)?);
                if lo > hi {
                    return Err(format!("empty range `{s}`"));
                }
                Ok(IntRange { lo, hi })
            }
            None => {
                let v = num(s)?;
                Ok(IntRange { lo: v, hi: v })
            }
        }
    }

    fn is_fixed(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InstanceSource {
    Generated {
        kind: InstanceKind,
        n: IntRange,
        m: IntRange,
        s: usize,
        weights: WeightDist,
    },
    VertexWeighted {
        n: IntRange,
        m: IntRange,
        max_degree: usize,
        max_weight: u64,
    },
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstanceBlock {
    pub id: String,
    pub source: InstanceSource,
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub eps: Vec<f64>,
    pub solvers: Vec<String>,
    pub oracle_cap: usize,
    pub repeats: usize,
    pub timing: bool,
    pub jobs: usize,
    pub instances: Vec<InstanceBlock>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            eps: vec![0.1],
            solvers: vec!["greedy".into()],
            oracle_cap: 20,
            repeats: 5,
            timing: true,
            jobs: 1,
            instances: Vec::new(),
        }
    }
}

#[derive(Default)]
struct BlockDraft {
    line: usize,
    id: Option<String>,
    kind: Option<String>,
    n: Option<IntRange>,
    m: Option<IntRange>,
    s: Option<usize>,
    weights: Option<WeightDist>,
    seed: Option<u64>,
    count: Option<usize>,
    max_degree: Option<usize>,
    max_weight: Option<u64>,
    path: Option<String>,
}

impl BlockDraft {
    fn finish(self, index: usize, base: Option<&Path>) -> Result<InstanceBlock> {
        let line = self.line;
        let err = |message: String| Error::Config { line, message };
        let need_n = || self.n.ok_or_else(|| err("missing `n`".into()));
        let need_m = || self.m.ok_or_else(|| err("missing `m`".into()));
        let kind = self.kind.as_deref().unwrap_or("graph");
        let source = match kind {
            "vwgraph" => InstanceSource::VertexWeighted {
                n: need_n()?,
                m: need_m()?,
                max_degree: self.max_degree.unwrap_or(usize::MAX),
                max_weight: self.max_weight.ok_or_else(|| err("missing `max_weight`".into()))?,
            },
            "file" => {
                let path = self.path.as_deref().ok_or_else(|| err("missing `path`".into()))?;
                let path = match base {
                    Some(dir) => dir.join(path),
                    None => PathBuf::from(path),
                };
                InstanceSource::File(path)
            }
            other => {
                let kind: InstanceKind = other.parse().map_err(err)?;
                InstanceSource::Generated {
                    kind,
                    n: need_n()?,
                    m: need_m()?,
                    s: self.s.unwrap_or(2),
                    weights: self
                        .weights
                        .unwrap_or(WeightDist::Uniform { lo: 1.0, hi: 1e6 }),
                }
            }
        };
        Ok(InstanceBlock {
            id: self.id.unwrap_or_else(|| format!("instance{index}")),
            source,
            seed: self.seed.unwrap_or(0),
            count: self.count.unwrap_or(1),
        })
    }
}

/// Parses a config. `base` resolves relative `path` entries.
pub fn parse_config(text: &str, base: Option<&Path>) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::default();
    let mut block: Option<BlockDraft> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Config { line, message };
        if content == "[instance]" {
            if let Some(done) = block.take() {
                let idx = config.instances.len();
                config.instances.push(done.finish(idx, base)?);
            }
            block = Some(BlockDraft {
                line,
                ..Default::default()
            });
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected `key = value`, found `{content}`")))?;
        let parse_num = |v: &str| v.parse::<f64>().map_err(|_| err(format!("bad number `{v}`")));
        let parse_usize = |v: &str| v.parse::<usize>().map_err(|_| err(format!("bad integer `{v}`")));

        match block.as_mut() {
            None => match key {
                "eps" => {
                    config.eps = value.split(',').map(|v| parse_num(v.trim())).collect::<Result<_>>()?;
                    for &e in &config.eps {
                        snap_eps(e).map_err(|e| err(e.to_string()))?;
                    }
                }
                "solvers" => {
                    config.solvers = value.split(',').map(|v| v.trim().to_string()).collect();
                    if let Some(bad) = config.solvers.iter().find(|s| !SOLVER_NAMES.contains(&s.as_str())) {
                        return Err(err(format!("unknown solver `{bad}`")));
                    }
                }
                "oracle_cap" => config.oracle_cap = parse_usize(value)?,
                "repeats" => config.repeats = parse_usize(value)?.max(1),
                "jobs" => config.jobs = parse_usize(value)?.max(1),
                "timing" => {
                    config.timing = value.parse().map_err(|_| err(format!("bad boolean `{value}`")))?
                }
                other => return Err(err(format!("unknown setting `{other}`"))),
            },
            Some(b) => match key {
                "id" => b.id = Some(value.to_string()),
                "kind" => b.kind = Some(value.to_string()),
                "n" => b.n = Some(IntRange::parse(value).map_err(err)?),
                "m" => b.m = Some(IntRange::parse(value).map_err(err)?),
                "s" => b.s = Some(parse_usize(value)?),
                "weights" => b.weights = Some(value.parse().map_err(err)?),
                "seed" => b.seed = Some(value.parse().map_err(|_| err(format!("bad seed `{value}`")))?),
                "count" => b.count = Some(parse_usize(value)?),
                "max_degree" => b.max_degree = Some(parse_usize(value)?),
                "max_weight" => {
                    b.max_weight = Some(value.parse().map_err(|_| err(format!("bad integer `{value}`")))?)
                }
                "path" => b.path = Some(value.to_string()),
                other => return Err(err(format!("unknown instance key `{other}`"))),
            },
        }
    }
    if let Some(done) = block.take() {
        let idx = config.instances.len();
        config.instances.push(done.finish(idx, base)?);
    }
    Ok(config)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Matching(WeightedHypergraph),
    IndependentSet(VertexWeightedGraph),
}

impl Problem {
    fn label(&self) -> &'static str {
        match self {
            Problem::Matching(_) => "matching",
            Problem::IndependentSet(_) => "mwis",
        }
    }

    /// `(n, m, s)`: for independent set problems the graph's vertex and
    /// edge counts and its maximum degree.
    fn dims(&self) -> (usize, usize, usize) {
        match self {
            Problem::Matching(h) => (h.num_vertices(), h.num_edges(), h.max_edge_size()),
            Problem::IndependentSet(g) => (g.num_vertices(), g.num_edges(), g.max_degree()),
        }
    }

    fn hypergraph(&self) -> WeightedHypergraph {
        match self {
            Problem::Matching(h) => h.clone(),
            Problem::IndependentSet(g) => dual_hypergraph(g),
        }
    }
}

fn sample_range(rng: &mut ChaCha8Rng, r: IntRange) -> usize {
    if r.is_fixed() {
        r.lo
    } else {
        rng.random_range(r.lo..=r.hi)
    }
}

/// Instance `index` of a block, generated or loaded.
pub fn materialize(block: &InstanceBlock, index: usize) -> Result<(String, Problem)> {
    let seed = block.seed.wrapping_add(index as u64);
    let id = if block.count == 1 {
        block.id.clone()
    } else {
        format!("{}-{index}", block.id)
    };
    // dimensions come from a stream separate from the instance's own
    let mut dims = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let problem = match &block.source {
        InstanceSource::Generated { kind, n, m, s, weights } => {
            let n = sample_range(&mut dims, *n);
            let m = if m.is_fixed() {
                m.lo
            } else {
                let cap = match kind {
                    InstanceKind::Graph => n * n.saturating_sub(1) / 2,
                    InstanceKind::Bipartite => (n / 2) * (n - n / 2),
                    InstanceKind::Hypergraph => usize::MAX,
                };
                let hi = m.hi.min(cap);
                sample_range(&mut dims, IntRange { lo: m.lo.min(hi), hi })
            };
            let spec = GenSpec {
                kind: *kind,
                n,
                m,
                s: *s,
                weights: *weights,
                seed,
            };
            Problem::Matching(generate_instance(&spec)?)
        }
        InstanceSource::VertexWeighted { n, m, max_degree, max_weight } => {
            let n = sample_range(&mut dims, *n);
            let m = if m.is_fixed() {
                m.lo
            } else {
                let cap = (n * n.saturating_sub(1) / 2).min(n.saturating_mul(*max_degree) / 2);
                let hi = m.hi.min(cap);
                sample_range(&mut dims, IntRange { lo: m.lo.min(hi), hi })
            };
            let spec = VertexGraphSpec {
                n,
                m,
                max_degree: *max_degree,
                max_weight: *max_weight,
                seed,
                strict: block_is_strict(&block.source),
            };
            Problem::IndependentSet(generate_vertex_weighted(&spec)?)
        }
        InstanceSource::File(path) => {
            let text = std::fs::read_to_string(path)?;
            if text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("g ")) {
                Problem::IndependentSet(parse_vertex_weighted(&text)?)
            } else {
                Problem::Matching(parse_instance(&text)?)
            }
        }
    };
    Ok((id, problem))
}

/// Fixed edge counts must be met exactly; sampled ones are best effort.
fn block_is_strict(source: &InstanceSource) -> bool {
    matches!(source, InstanceSource::VertexWeighted { m, .. } if m.is_fixed())
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub instance: String,
    pub problem: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub s: Option<usize>,
    pub eps: f64,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub solver: String,
    pub alpha: Option<f64>,
    pub cascade_weight: Option<f64>,
    pub best_shift: Option<usize>,
    pub solver_alone_weight: Option<f64>,
    pub greedy_weight: Option<f64>,
    pub opt: Option<f64>,
    pub ratio: Option<f64>,
    pub transform_us: Option<u64>,
    pub partition_us: Option<u64>,
    pub solve_us: Option<u64>,
    pub error: Option<String>,
}

pub const CSV_HEADER: &str = "instance,problem,n,m,s,eps,k,l,solver,alpha,cascade_weight,best_shift,\
solver_alone_weight,greedy_weight,opt,ratio,transform_us,partition_us,solve_us,error";

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

fn micros(d: Duration) -> u64 {
    d.as_micros() as u64
}

/// Runs one (instance, eps, solver) row.
pub fn run_row(
    id: &str,
    problem: &Problem,
    eps: f64,
    solver_name: &str,
    config: &ExperimentConfig,
) -> ExperimentRecord {
    let (n, m, s) = problem.dims();
    let mut record = ExperimentRecord {
        instance: id.to_string(),
        problem: problem.label().to_string(),
        n: Some(n),
        m: Some(m),
        s: Some(s),
        eps,
        k: None,
        l: None,
        solver: solver_name.to_string(),
        alpha: None,
        cascade_weight: None,
        best_shift: None,
        solver_alone_weight: None,
        greedy_weight: None,
        opt: None,
        ratio: None,
        transform_us: None,
        partition_us: None,
        solve_us: None,
        error: None,
    };
    if let Err(e) = fill_row(&mut record, problem, eps, solver_name, config) {
        record.error = Some(e.to_string());
    }
    record
}

fn fill_row(
    record: &mut ExperimentRecord,
    problem: &Problem,
    eps: f64,
    solver_name: &str,
    config: &ExperimentConfig,
) -> Result<()> {
    let snapped = snap_eps(eps)?;
    let solver = solver_by_name(solver_name, snapped)?;
    let h = problem.hypergraph();
    record.alpha = solver.alpha(h.max_edge_size());

    let options = CascadeOptions::default();
    let (result, timings) = if config.timing {
        reduce_and_solve_with(&h, snapped, solver.as_ref(), options)?;
        let mut runs = Vec::with_capacity(config.repeats);
        let mut first = None;
        for _ in 0..config.repeats.max(1) {
            let (res, t) = reduce_and_solve_with(&h, snapped, solver.as_ref(), options)?;
            first.get_or_insert(res);
            runs.push(t);
        }
        let timings = PhaseTimings {
            transform: median(runs.iter().map(|t| t.transform).collect()),
            partition: median(runs.iter().map(|t| t.partition).collect()),
            solve: median(runs.iter().map(|t| t.solve).collect()),
        };
        (first.unwrap(), Some(timings))
    } else {
        (reduce_and_solve_with(&h, snapped, solver.as_ref(), options)?.0, None)
    };

    record.k = Some(result.params.k);
    record.l = Some(result.params.l);
    record.cascade_weight = Some(result.weight);
    record.best_shift = Some(result.best_shift);
    if let Some(t) = timings {
        record.transform_us = Some(micros(t.transform));
        record.partition_us = Some(micros(t.partition));
        record.solve_us = Some(micros(t.solve));
    }

    let bound = h.max_weight().unwrap_or(1.0);
    record.solver_alone_weight = solver
        .solve(&h, bound)
        .ok()
        .and_then(|mm| matching_weight(&h, &mm).ok());
    record.greedy_weight = Some(matching_weight(&h, &greedy_matching(&h))?);
    if h.num_edges() <= config.oracle_cap {
        let opt = matching_weight(&h, &exact_matching_bruteforce(&h, config.oracle_cap)?)?;
        record.opt = Some(opt);
        if opt > 0.0 {
            record.ratio = Some(result.weight / opt);
        }
    }
    Ok(())
}

/// All rows in config order: instances, then eps, then solvers.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<ExperimentRecord> {
    let mut jobs: Vec<(String, std::result::Result<Problem, String>, f64, String)> = Vec::new();
    for block in &config.instances {
        for index in 0..block.count {
            let (id, problem) = match materialize(block, index) {
                Ok((id, p)) => (id, Ok(p)),
                Err(e) => {
                    let id = if block.count == 1 { block.id.clone() } else { format!("{}-{index}", block.id) };
                    (id, Err(e.to_string()))
                }
            };
            for &eps in &config.eps {
                for solver in &config.solvers {
                    jobs.push((id.clone(), problem.clone(), eps, solver.clone()));
                }
            }
        }
    }

    let run = |(id, problem, eps, solver): &(String, std::result::Result<Problem, String>, f64, String)| match problem {
        Ok(p) => run_row(id, p, *eps, solver, config),
        Err(e) => ExperimentRecord {
            instance: id.clone(),
            problem: String::new(),
            n: None,
            m: None,
            s: None,
            eps: *eps,
            k: None,
            l: None,
            solver: solver.clone(),
            alpha: None,
            cascade_weight: None,
            best_shift: None,
            solver_alone_weight: None,
            greedy_weight: None,
            opt: None,
            ratio: None,
            transform_us: None,
            partition_us: None,
            solve_us: None,
            error: Some(e.clone()),
        },
    };

    if config.jobs <= 1 {
        jobs.iter().map(run).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
            Ok(pool) => pool.install(|| jobs.par_iter().map(run).collect()),
            Err(_) => jobs.iter().map(run).collect(),
        }
    }
}

/// Writes the header and rows as RFC 4180 CSV.
pub fn write_csv<W: std::io::Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer
        .write_record(CSV_HEADER.split(','))
        .map_err(|e| Error::Io(e.into()))?;
    for r in records {
        writer.serialize(r).map_err(|e| Error::Io(e.into()))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn csv_string(records: &[ExperimentRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "
eps = 0.1
solvers = greedy
timing = false

[instance]
id = tiny
kind = graph
n = 6
m = 8
weights = uniform(1, 100)
seed = 1
";

    #[test]
    fn one_row_plus_header() {
        let config = parse_config(ONE, None).unwrap();
        let rows = run_experiment(&config);
        assert_eq!(rows.len(), 1);
        let csv = csv_string(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(rows[0].opt.is_some() && rows[0].ratio.is_some());
        assert!(rows[0].error.is_none());
    }

    #[test]
    fn oracle_cap_exceeded_leaves_columns_empty() {
        let text = ONE.replace("timing = false", "timing = false\noracle_cap = 5");
        let rows = run_experiment(&parse_config(&text, None).unwrap());
        assert_eq!(rows[0].opt, None);
        assert_eq!(rows[0].ratio, None);
        let csv = csv_string(&rows);
        let fields: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[14], "");
        assert_eq!(fields[15], "");
    }

    #[test]
    fn failures_are_recorded_and_run_continues() {
        let text = format!("{ONE}\n[instance]\nid = bad\nkind = graph\nn = 3\nm = 10\n");
        let text = text.replace("solvers = greedy", "solvers = greedy, exact");
        let rows = run_experiment(&parse_config(&text, None).unwrap());
        assert_eq!(rows.len(), 4);
        assert!(rows[0].error.is_none() && rows[1].error.is_none());
        assert!(rows[2].error.as_deref().unwrap().contains("at most 3"));
        assert_eq!(rows[3].instance, "bad");
    }

    #[test]
    fn timing_columns() {
        let text = ONE.replace("timing = false", "timing = true\nrepeats = 3");
        let rows = run_experiment(&parse_config(&text, None).unwrap());
        assert!(rows[0].solve_us.is_some() && rows[0].transform_us.is_some());
    }

    #[test]
    fn ranges_and_counts() {
        let text = "
eps = 0.2
solvers = exact
timing = false
jobs = 3
[instance]
id = r
kind = graph
n = 4..10
m = 1..20
seed = 5
count = 12
[instance]
id = w
kind = vwgraph
n = 4..10
m = 0..14
max_degree = 4
max_weight = 20
count = 5
";
        let config = parse_config(text, None).unwrap();
        let rows = run_experiment(&config);
        assert_eq!(rows.len(), 17);
        for r in &rows {
            assert!(r.error.is_none(), "{r:?}");
            let n = r.n.unwrap();
            assert!((4..=10).contains(&n));
        }
        assert_eq!(rows[0].instance, "r-0");
        assert_eq!(rows[12].problem, "mwis");
        assert!(rows[12..].iter().all(|r| r.s.unwrap() <= 4));
        // parallel rows keep config order and content
        let mut seq = config.clone();
        seq.jobs = 1;
        assert_eq!(rows, run_experiment(&seq));
    }

    #[test]
    fn config_errors() {
        assert!(matches!(parse_config("eps = 2", None), Err(Error::Config { line: 1, .. })));
        assert!(parse_config("solvers = blossom", None).is_err());
        assert!(parse_config("bogus = 1", None).is_err());
        assert!(parse_config("[instance]\nkind = graph\nm = 3", None).is_err());
        assert!(parse_config("[instance]\nkind = file", None).is_err());
        assert!(parse_config("[instance]\nn = 5..2\nm = 1", None).is_err());
    }
}
