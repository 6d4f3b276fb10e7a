use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use esd_core::generators::{ba_graph, er_graph, graph_stats, BaConfig};
use esd_core::oracle::ExactTracker;
use esd_core::rng::derive_seed;
use esd_core::{Edge, Graph};
use esd_harness::experiment::{compare, run_experiment, EstimatorSpec, ExperimentConfig, StreamSpec};
use esd_harness::{io as formats, report};

/// Streaming triangle-count estimation on fully dynamic graphs.
#[derive(Parser)]
#[command(name = "esd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph as an edge list.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Build a stream file from an edge list or a snapshot directory.
    Stream(StreamArgs),
    /// Exact triangle count of an edge list or of the final graph of a stream.
    Exact {
        #[command(flatten)]
        source: Source,
    },
    /// Run replicated experiments and write a summary CSV.
    Run(RunArgs),
    /// Sweep sample fractions at equal budget for all three estimators.
    Compare(CompareArgs),
}

#[derive(Subcommand)]
enum Model {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preferential attachment with weights d^gamma.
    Ba {
        /// One of the six 20,000-node presets (1-6).
        #[arg(long, conflicts_with_all = ["nodes", "m", "gamma"])]
        preset: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        nodes: usize,
        /// Edges per new node.
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 1.5)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
struct Source {
    /// Edge list; turned into a stream by the deletion options.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Stream file (`u v ±1` per line).
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Directory of edge-list snapshots, replayed as differences.
    #[arg(long)]
    snapshots: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Deletions {
    /// Probability that a deletion batch follows an insertion.
    #[arg(long)]
    pe: Option<f64>,
    /// Per-edge (or per-node) deletion probability within a batch.
    #[arg(long)]
    pd: Option<f64>,
    /// Delete nodes (all incident edges) instead of single edges.
    #[arg(long)]
    node_del: bool,
}

#[derive(Args)]
struct StreamArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    deletions: Deletions,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    deletions: Deletions,
    /// ESD sampling fraction (repeatable).
    #[arg(long)]
    alpha: Vec<f64>,
    /// Run the static-graph ESD variant instead of the dynamic one.
    #[arg(long = "static")]
    static_mode: bool,
    /// DOULION sampling probability (repeatable).
    #[arg(long)]
    p: Vec<f64>,
    /// Reservoir capacity M (repeatable).
    #[arg(long)]
    reservoir: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Events between trace points; defaults to max(1, events/500).
    #[arg(long)]
    stride: Option<usize>,
    /// Summary CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trace CSV of the first replication.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Record wall-clock time per run (the report is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    deletions: Deletions,
    /// Sample fractions, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.02,0.05,0.1")]
    fractions: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_edges(path: &Path) -> Result<Vec<Edge>> {
    let raw = formats::read_edge_list(path)?;
    let (edges, dropped) = formats::simple_edges(&raw);
    if dropped > 0 {
        eprintln!("{}: dropped {dropped} self-loops or repeated edges", path.display());
    }
    Ok(edges)
}

fn stream_spec(source: &Source, del: &Deletions) -> Result<StreamSpec> {
    let has_deletions = del.pe.is_some() || del.pd.is_some() || del.node_del;
    if let Some(path) = &source.input {
        let edges = load_edges(path)?;
        if !has_deletions {
            return Ok(StreamSpec::Permutation { edges });
        }
        let (Some(p_e), Some(p_d)) = (del.pe, del.pd) else {
            bail!("--pe and --pd are both required for deletion streams");
        };
        return Ok(if del.node_del {
            StreamSpec::NodeDeletion { edges, p_e, p_d }
        } else {
            StreamSpec::EdgeDeletion { edges, p_e, p_d }
        });
    }
    if has_deletions {
        bail!("--pe, --pd and --node-del apply to --input edge lists only");
    }
    if let Some(path) = &source.stream {
        return Ok(StreamSpec::File(path.clone()));
    }
    let dir = source.snapshots.as_ref().expect("clap enforces one source");
    Ok(StreamSpec::SnapshotDiff {
        snapshots: formats::read_snapshot_dir(dir)?,
    })
}

fn write_graph(g: &Graph, out: Option<&Path>) -> Result<()> {
    let edges: Vec<Edge> = g.edges().collect();
    formats::write_edge_list(&edges, output(out)?)?;
    let s = graph_stats(g);
    eprintln!(
        "nodes {} edges {} triangles {} clustering {:.6}",
        s.nodes, s.edges, s.triangles, s.clustering
    );
    Ok(())
}

fn generate(model: Model) -> Result<()> {
    match model {
        Model::Er { nodes, p, seed, out } => write_graph(&er_graph(nodes, p, seed)?, out.as_deref()),
        Model::Ba {
            preset,
            nodes,
            m,
            gamma,
            seed,
            out,
        } => {
            let cfg = match preset {
                Some(k) => BaConfig::preset(k, seed).with_context(|| format!("no preset {k}; use 1-6"))?,
                None => BaConfig::new(nodes, m, gamma, seed),
            };
            write_graph(&ba_graph(&cfg)?, out.as_deref())
        }
    }
}

fn exact(source: &Source) -> Result<()> {
    let g = if let Some(path) = &source.input {
        Graph::from_edges(load_edges(path)?)
    } else {
        let events = stream_spec(source, &Deletions { pe: None, pd: None, node_del: false })?.realize(0)?;
        let mut g = Graph::new();
        let mut tracker = ExactTracker::new();
        for (i, ev) in events.iter().enumerate() {
            if tracker.replay(ev, &mut g)?.is_none() {
                bail!("event {} ({} {} {}) is inconsistent with the graph", i + 1, ev.u, ev.v, ev.sign);
            }
        }
        g
    };
    let s = graph_stats(&g);
    println!("nodes {}", s.nodes);
    println!("edges {}", s.edges);
    println!("triangles {}", s.triangles);
    println!("wedges {}", s.wedges);
    println!("clustering {}", s.clustering);
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { model } => generate(model),
        Command::Stream(a) => {
            let events = stream_spec(&a.source, &a.deletions)?.realize(derive_seed(a.seed, 0, 0))?;
            formats::write_stream(&events, output(a.out.as_deref())?)?;
            Ok(())
        }
        Command::Exact { source } => exact(&source),
        Command::Run(a) => {
            let mut estimators = Vec::new();
            for &alpha in &a.alpha {
                estimators.push(if a.static_mode {
                    EstimatorSpec::EsdStatic { alpha }
                } else {
                    EstimatorSpec::Esd { alpha }
                });
            }
            estimators.extend(a.p.iter().map(|&p| EstimatorSpec::Doulion { p }));
            estimators.extend(a.reservoir.iter().map(|&capacity| EstimatorSpec::Triest { capacity }));
            let mut cfg = ExperimentConfig::new(stream_spec(&a.source, &a.deletions)?, estimators, a.reps, a.seed);
            cfg.trace_stride = a.stride;
            cfg.timing = a.timing;
            let out = run_experiment(&cfg)?;
            report::write_summary(&out.summary, output(a.out.as_deref())?)?;
            if let Some(tp) = &a.trace {
                report::write_trace(&out.trace, output(Some(tp))?)?;
            }
            Ok(())
        }
        Command::Compare(a) => {
            let rows = compare(&stream_spec(&a.source, &a.deletions)?, &a.fractions, a.reps, a.seed)?;
            report::write_summary(&rows, output(a.out.as_deref())?)?;
            Ok(())
        }
    }
}
