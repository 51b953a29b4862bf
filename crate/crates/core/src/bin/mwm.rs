use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use mwm_reduce::cascade::{reduce_and_solve_with, CascadeOptions};
use mwm_reduce::experiment::{parse_config, run_experiment, write_csv};
use mwm_reduce::format::{
    parse_instance, parse_vertex_weighted, write_instance, write_solution, write_vertex_weighted, SolutionKind,
};
use mwm_reduce::generate::{generate_instance, generate_vertex_weighted, GenSpec, InstanceKind, VertexGraphSpec};
use mwm_reduce::mwis::mwis_via_duality_with;
use mwm_reduce::partition::{build_shift_partition, compute_params, weight_levels};
use mwm_reduce::solvers::solver_by_name;
use mwm_reduce::transform::snap_eps;
use mwm_reduce::verify::verify;

#[derive(Parser)]
#[command(name = "mwm", version, about = "Approximate maximum weight matching by weight-range reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchingSolverName {
    Greedy,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum MwisSolverName {
    Exact,
    Greedy,
    DupGreedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Graph,
    Hypergraph,
    Bipartite,
    /// Vertex-weighted graph for `mwis`.
    Vwgraph,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random instance.
    Generate {
        #[arg(long, value_enum, default_value = "graph")]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Maximum edge size (hypergraph).
        #[arg(long, default_value_t = 2)]
        s: usize,
        /// `uniform(lo,hi)` or `powerlaw(alpha,max)`.
        #[arg(long, default_value = "uniform(1,1000000)")]
        weights: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree bound (vwgraph).
        #[arg(long, default_value_t = usize::MAX)]
        max_degree: usize,
        /// Integer weight bound (vwgraph).
        #[arg(long, default_value_t = 20)]
        max_weight: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Approximate a maximum weight matching.
    Solve {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value = "greedy")]
        solver: MatchingSolverName,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Print one JSON record per sub-solve to stdout.
        #[arg(long)]
        trace: bool,
        /// Evaluate shifts in parallel.
        #[arg(long)]
        parallel: bool,
    },
    /// Approximate a maximum weight independent set via the dual hypergraph.
    Mwis {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value = "exact")]
        solver: MwisSolverName,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Check a solution file against its instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, alias = "solution")]
        matching: PathBuf,
    },
    /// Run an experiment config and write CSV.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the config's `jobs`.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the block and gap table of an instance.
    PartitionDebug {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: f64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate {
            kind,
            n,
            m,
            s,
            weights,
            seed,
            max_degree,
            max_weight,
            output,
        } => {
            let text = match kind {
                GenKind::Vwgraph => write_vertex_weighted(&generate_vertex_weighted(&VertexGraphSpec {
                    n,
                    m,
                    max_degree,
                    max_weight,
                    seed,
                    strict: true,
                })?),
                other => {
                    let kind = match other {
                        GenKind::Graph => InstanceKind::Graph,
                        GenKind::Hypergraph => InstanceKind::Hypergraph,
                        _ => InstanceKind::Bipartite,
                    };
                    let weights = weights.parse().map_err(anyhow::Error::msg)?;
                    write_instance(&generate_instance(&GenSpec { kind, n, m, s, weights, seed })?)
                }
            };
            emit(output.as_deref(), &text)?;
        }
        Command::Solve {
            eps,
            solver,
            input,
            output,
            trace,
            parallel,
        } => {
            let h = parse_instance(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            let name = match solver {
                MatchingSolverName::Greedy => "greedy",
                MatchingSolverName::Exact => "exact",
            };
            let black_box = solver_by_name(name, snap_eps(eps)?)?;
            let (result, _) = reduce_and_solve_with(&h, eps, black_box.as_ref(), CascadeOptions { parallel })?;
            if trace {
                let mut out = io::stdout().lock();
                for record in &result.trace {
                    serde_json::to_writer(&mut out, record)?;
                    writeln!(out)?;
                }
            }
            let text = write_solution(SolutionKind::Matching, result.weight, &result.best.ids());
            match output {
                Some(path) => emit(Some(&path), &text)?,
                None if !trace => emit(None, &text)?,
                None => {}
            }
            eprintln!(
                "eps={} k={} l={} best shift {} weight {} ({} edges)",
                result.transform.eps,
                result.params.k,
                result.params.l,
                result.best_shift,
                result.weight,
                result.best.len()
            );
        }
        Command::Mwis {
            eps,
            solver,
            input,
            output,
            parallel,
        } => {
            let g = parse_vertex_weighted(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            let name = match solver {
                MwisSolverName::Exact => "exact",
                MwisSolverName::Greedy => "greedy",
                MwisSolverName::DupGreedy => "dup-greedy",
            };
            let res = mwis_via_duality_with(&g, eps, name, CascadeOptions { parallel })?;
            let text = write_solution(SolutionKind::IndependentSet, res.weight as f64, &res.vertices);
            emit(output.as_deref(), &text)?;
            eprintln!("independent set of {} vertices, weight {}", res.vertices.len(), res.weight);
        }
        Command::Verify { instance, matching } => {
            let verdict = verify(&read(&instance)?, &read(&matching)?)?;
            println!("{verdict}");
            if !verdict.is_ok() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench { config, output, jobs } => {
            let base = config.parent().map(Path::to_path_buf);
            let mut cfg = parse_config(&read(&config)?, base.as_deref())?;
            if let Some(j) = jobs {
                cfg.jobs = j.max(1);
            }
            let rows = run_experiment(&cfg);
            let failed = rows.iter().filter(|r| r.error.is_some()).count();
            match output {
                Some(path) => write_csv(&rows, fs::File::create(&path)?)?,
                None => write_csv(&rows, io::stdout().lock())?,
            }
            eprintln!("{} rows, {failed} failed", rows.len());
        }
        Command::PartitionDebug { input, eps } => {
            let h = parse_instance(&read(&input)?)?;
            print!("{}", partition_table(&h, eps)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn partition_table(h: &mwm_reduce::WeightedHypergraph, eps: f64) -> Result<String> {
    use std::fmt::Write as _;
    let (rounded, tr) = mwm_reduce::cascade::prepare(h, eps)?;
    let params = compute_params(tr.eps, h.max_edge_size())?;
    let levels = weight_levels(&rounded);
    let mut out = String::new();
    writeln!(
        out,
        "eps={} (requested {}) clamp_scale={} k={} l={} levels={} (heaviest {:?}, lightest {:?})",
        tr.eps,
        tr.requested_eps,
        tr.clamp_scale,
        params.k,
        params.l,
        levels.len(),
        levels.first(),
        levels.last()
    )?;
    if levels.is_empty() {
        writeln!(out, "no edges")?;
        return Ok(out);
    }
    for x in 0..params.k {
        let p = build_shift_partition(&levels, &params, x);
        writeln!(out, "shift {x}:")?;
        for (b, block) in p.blocks.iter().enumerate() {
            let edges = rounded.exponents.iter().filter(|&&e| block.contains(e)).count();
            let role = match p.interval_of_level(block.hi) {
                Some(j) => format!("interval {}", j + 1),
                None => "GAP".to_string(),
            };
            writeln!(out, "  block {b:>3}  levels {:>4}..={:<4}  edges {edges:>6}  {role}", block.hi, block.lo)?;
        }
    }
    Ok(out)
}
