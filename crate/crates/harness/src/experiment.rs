//! Replicated experiments: one stream realization, many independent
//! estimator runs, metrics against the exact count.
//!
//! A run is a pure function of its [`ExperimentConfig`] (unless timing is
//! switched on). The stream is realized once from the base seed and replayed
//! by every replication; each replication owns a graph replica and gives
//! every estimator its own generator, seeded from `(seed, estimator,
//! replication)`. Replications run in parallel and are reduced in
//! replication order.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use esd_core::baselines::{BaselineError, Doulion, Triest};
use esd_core::esd::{EsdError, EsdEstimator, Mode};
use esd_core::oracle::{ExactTracker, OracleError};
use esd_core::rng::{derive_seed, seeded_rng};
use esd_core::stream::{self, StreamError};
use esd_core::{Edge, EdgeEvent, Graph};

use crate::io::{self, FormatError};
use crate::metrics::{self, MetricsError};

/// Where the events come from.
#[derive(Debug, Clone)]
pub enum StreamSpec {
    /// Every edge inserted once, in random order.
    Permutation { edges: Vec<Edge> },
    /// Random permutation with random edge deletions.
    EdgeDeletion { edges: Vec<Edge>, p_e: f64, p_d: f64 },
    /// Random permutation with random node deletions.
    NodeDeletion { edges: Vec<Edge>, p_e: f64, p_d: f64 },
    /// Differences between consecutive snapshots.
    SnapshotDiff { snapshots: Vec<Vec<Edge>> },
    /// A stream file on disk.
    File(PathBuf),
    /// An explicit event list.
    Events(Vec<EdgeEvent>),
}

impl StreamSpec {
    /// Materializes the events. Generated models draw from `seed`.
    pub fn realize(&self, seed: u64) -> Result<Vec<EdgeEvent>, ExperimentError> {
        Ok(match self {
            StreamSpec::Permutation { edges } => stream::permutation_stream(edges, seed)?,
            StreamSpec::EdgeDeletion { edges, p_e, p_d } => {
                stream::dynamic_edge_deletion_stream(edges, *p_e, *p_d, seed)?
            }
            StreamSpec::NodeDeletion { edges, p_e, p_d } => {
                stream::dynamic_node_deletion_stream(edges, *p_e, *p_d, seed)?
            }
            StreamSpec::SnapshotDiff { snapshots } => stream::snapshot_diff_stream(snapshots)?,
            StreamSpec::File(path) => io::read_stream_file(path)?,
            StreamSpec::Events(events) => events.clone(),
        })
    }
}

/// One estimator to run in every replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorSpec {
    /// ESD on the dynamic stream with sampling fraction `alpha`.
    Esd { alpha: f64 },
    /// ESD static-graph variant over the final graph (insert-only streams).
    EsdStatic { alpha: f64 },
    Doulion { p: f64 },
    Triest { capacity: usize },
}

impl EstimatorSpec {
    pub fn label(&self) -> &'static str {
        match self {
            EstimatorSpec::Esd { .. } => "esd",
            EstimatorSpec::EsdStatic { .. } => "esd-static",
            EstimatorSpec::Doulion { .. } => "doulion",
            EstimatorSpec::Triest { .. } => "triest",
        }
    }

    /// The sampling parameter: α, p or M.
    pub fn parameter(&self) -> f64 {
        match *self {
            EstimatorSpec::Esd { alpha } | EstimatorSpec::EsdStatic { alpha } => alpha,
            EstimatorSpec::Doulion { p } => p,
            EstimatorSpec::Triest { capacity } => capacity as f64,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub stream: StreamSpec,
    pub estimators: Vec<EstimatorSpec>,
    pub replications: usize,
    pub seed: u64,
    /// Events between trace points; defaults to `max(1, events / 500)`.
    pub trace_stride: Option<usize>,
    /// Measure wall-clock time per run. Timings make the report
    /// non-deterministic.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(stream: StreamSpec, estimators: Vec<EstimatorSpec>, replications: usize, seed: u64) -> Self {
        Self {
            stream,
            estimators,
            replications,
            seed,
            trace_stride: None,
            timing: false,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("replications must be at least 1")]
    NoReplications,
    #[error("no estimators configured")]
    NoEstimators,
    #[error("trace stride must be positive")]
    ZeroStride,
    #[error("stream event {index} ({event:?}) is inconsistent with the graph")]
    InconsistentStream { index: usize, event: EdgeEvent },
    #[error("the static ESD variant needs an insert-only stream")]
    StaticNeedsInsertOnly,
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Esd(#[from] EsdError),
    #[error(transparent)]
    Baseline(#[from] BaselineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Per-estimator summary over all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub estimator: String,
    pub parameter: f64,
    pub replications: usize,
    pub truth: f64,
    pub mean: f64,
    pub rel_err: f64,
    pub nrmse: f64,
    pub variance: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub edges_sampled_mean: f64,
    /// `None` unless timing was requested.
    pub wall_ms_mean: Option<f64>,
}

impl SummaryRow {
    /// 95% interval half-width.
    pub fn ci_half_width(&self) -> f64 {
        (self.ci_high - self.ci_low) / 2.0
    }
}

/// One point of a replication-0 time series.
#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub event_index: usize,
    pub truth: f64,
    pub estimator: String,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub summary: Vec<SummaryRow>,
    /// Time series of the first replication, every `stride` events and at
    /// the end.
    pub trace: Vec<TracePoint>,
    /// Final estimates, indexed `[estimator][replication]`.
    pub estimates: Vec<Vec<f64>>,
    pub events: usize,
    pub stride: usize,
}

const STREAM_TAG: u64 = 0;

enum Running<'g> {
    Esd(EsdEstimator),
    EsdStatic(EsdEstimator, &'g Graph),
    Doulion(Doulion),
    Triest(Triest),
}

impl<'g> Running<'g> {
    fn new(spec: &EstimatorSpec, seed: u64, full: &'g Graph) -> Result<Self, ExperimentError> {
        let rng = seeded_rng(seed);
        Ok(match *spec {
            EstimatorSpec::Esd { alpha } => Running::Esd(EsdEstimator::new(alpha, Mode::Dynamic, rng)?),
            EstimatorSpec::EsdStatic { alpha } => {
                Running::EsdStatic(EsdEstimator::new(alpha, Mode::Static, rng)?, full)
            }
            EstimatorSpec::Doulion { p } => Running::Doulion(Doulion::new(p, rng)?),
            EstimatorSpec::Triest { capacity } => Running::Triest(Triest::new(capacity, rng)?),
        })
    }

    /// `g` already reflects `ev`.
    fn feed(&mut self, ev: &EdgeEvent, g: &Graph) -> Result<(), ExperimentError> {
        match self {
            Running::Esd(e) => e.process_event(ev, g)?,
            Running::EsdStatic(e, full) => e.process_static(ev.u, ev.v, full)?,
            Running::Doulion(d) => d.process(ev),
            Running::Triest(t) => t.process(ev),
        }
        Ok(())
    }

    fn estimate(&self) -> f64 {
        match self {
            Running::Esd(e) | Running::EsdStatic(e, _) => e.estimate(),
            Running::Doulion(d) => d.estimate(),
            Running::Triest(t) => t.estimate(),
        }
    }

    fn edges_sampled(&self) -> f64 {
        match self {
            Running::Esd(e) | Running::EsdStatic(e, _) => e.sampled_events() as f64,
            Running::Doulion(d) => d.edges_sampled() as f64,
            Running::Triest(t) => t.reservoir_len() as f64,
        }
    }
}

struct ReplicationResult {
    finals: Vec<f64>,
    sampled: Vec<f64>,
    elapsed: Vec<Duration>,
    trace: Vec<Vec<f64>>,
}

/// Ground truth pass: exact counts at every trace point and at the end.
struct Truth {
    checkpoints: Vec<(usize, f64)>,
    final_count: f64,
    final_graph: Graph,
}

fn is_checkpoint(i: usize, stride: usize, total: usize) -> bool {
    (i + 1).is_multiple_of(stride) || i + 1 == total
}

fn ground_truth(events: &[EdgeEvent], stride: usize) -> Result<Truth, ExperimentError> {
    let mut g = Graph::new();
    let mut tracker = ExactTracker::new();
    let mut checkpoints = Vec::new();
    for (i, ev) in events.iter().enumerate() {
        if tracker.replay(ev, &mut g)?.is_none() {
            return Err(ExperimentError::InconsistentStream { index: i, event: *ev });
        }
        if is_checkpoint(i, stride, events.len()) {
            checkpoints.push((i + 1, tracker.count() as f64));
        }
    }
    Ok(Truth {
        checkpoints,
        final_count: tracker.count() as f64,
        final_graph: g,
    })
}

fn replicate(
    cfg: &ExperimentConfig,
    events: &[EdgeEvent],
    full: &Graph,
    stride: usize,
    rep: usize,
) -> Result<ReplicationResult, ExperimentError> {
    let mut running: Vec<Running> = cfg
        .estimators
        .iter()
        .enumerate()
        .map(|(k, spec)| Running::new(spec, derive_seed(cfg.seed, 1 + k as u64, rep as u64), full))
        .collect::<Result<_, _>>()?;
    let mut elapsed = vec![Duration::ZERO; running.len()];
    let mut trace = vec![Vec::new(); running.len()];
    let mut g = Graph::new();
    for (i, ev) in events.iter().enumerate() {
        ev.apply(&mut g);
        for (k, est) in running.iter_mut().enumerate() {
            if cfg.timing {
                let start = Instant::now();
                est.feed(ev, &g)?;
                elapsed[k] += start.elapsed();
            } else {
                est.feed(ev, &g)?;
            }
        }
        if rep == 0 && is_checkpoint(i, stride, events.len()) {
            for (k, est) in running.iter().enumerate() {
                trace[k].push(est.estimate());
            }
        }
    }
    Ok(ReplicationResult {
        finals: running.iter().map(Running::estimate).collect(),
        sampled: running.iter().map(Running::edges_sampled).collect(),
        elapsed,
        trace,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput, ExperimentError> {
    if cfg.replications == 0 {
        return Err(ExperimentError::NoReplications);
    }
    if cfg.estimators.is_empty() {
        return Err(ExperimentError::NoEstimators);
    }
    if cfg.trace_stride == Some(0) {
        return Err(ExperimentError::ZeroStride);
    }
    let events = cfg.stream.realize(derive_seed(cfg.seed, STREAM_TAG, 0))?;
    let has_static = cfg
        .estimators
        .iter()
        .any(|e| matches!(e, EstimatorSpec::EsdStatic { .. }));
    if has_static && events.iter().any(|e| !e.is_insert()) {
        return Err(ExperimentError::StaticNeedsInsertOnly);
    }
    let stride = cfg.trace_stride.unwrap_or((events.len() / 500).max(1));
    let truth = ground_truth(&events, stride)?;

    let results: Vec<ReplicationResult> = (0..cfg.replications)
        .into_par_iter()
        .map(|rep| replicate(cfg, &events, &truth.final_graph, stride, rep))
        .collect::<Result<_, _>>()?;

    let mut summary = Vec::with_capacity(cfg.estimators.len());
    let mut estimates = Vec::with_capacity(cfg.estimators.len());
    for (k, spec) in cfg.estimators.iter().enumerate() {
        let finals: Vec<f64> = results.iter().map(|r| r.finals[k]).collect();
        let sampled: Vec<f64> = results.iter().map(|r| r.sampled[k]).collect();
        let t = truth.final_count;
        let (ci_low, ci_high) = metrics::confidence_interval(&finals, 0.95)?;
        // relative metrics are undefined for a triangle-free graph
        let (rel_err, nrmse) = if t == 0.0 {
            (f64::NAN, f64::NAN)
        } else {
            (metrics::relative_error(&finals, t)?, metrics::nrmse(&finals, t)?)
        };
        let wall_ms_mean = cfg.timing.then(|| {
            results.iter().map(|r| r.elapsed[k].as_secs_f64() * 1e3).sum::<f64>() / results.len() as f64
        });
        summary.push(SummaryRow {
            estimator: spec.label().to_string(),
            parameter: spec.parameter(),
            replications: cfg.replications,
            truth: t,
            mean: metrics::mean(&finals)?,
            rel_err,
            nrmse,
            variance: metrics::sample_variance(&finals)?,
            ci_low,
            ci_high,
            edges_sampled_mean: metrics::mean(&sampled)?,
            wall_ms_mean,
        });
        estimates.push(finals);
    }

    let mut trace = Vec::new();
    for (j, &(event_index, exact)) in truth.checkpoints.iter().enumerate() {
        for (k, spec) in cfg.estimators.iter().enumerate() {
            let truth_here = match spec {
                EstimatorSpec::EsdStatic { .. } => truth.final_count,
                _ => exact,
            };
            trace.push(TracePoint {
                event_index,
                truth: truth_here,
                estimator: spec.label().to_string(),
                estimate: results[0].trace[k][j],
            });
        }
    }

    Ok(ExperimentOutput {
        summary,
        trace,
        estimates,
        events: events.len(),
        stride,
    })
}

/// Equal-budget sweep: for every fraction `f`, runs ESD with `α = f`,
/// DOULION with `p = f` and the reservoir with `M = round(f · |E|)`, where
/// `|E|` is the number of insertions in the stream.
pub fn compare(
    stream: &StreamSpec,
    fractions: &[f64],
    replications: usize,
    seed: u64,
) -> Result<Vec<SummaryRow>, ExperimentError> {
    // fix the realization once so every fraction sees the same events
    let events = stream.realize(derive_seed(seed, STREAM_TAG, 0))?;
    let insertions = events.iter().filter(|e| e.is_insert()).count();
    let mut rows = Vec::new();
    for &f in fractions {
        let capacity = ((f * insertions as f64).round() as usize).max(1);
        let cfg = ExperimentConfig::new(
            StreamSpec::Events(events.clone()),
            vec![
                EstimatorSpec::Esd { alpha: f },
                EstimatorSpec::Doulion { p: f },
                EstimatorSpec::Triest { capacity },
            ],
            replications,
            seed,
        );
        rows.extend(run_experiment(&cfg)?.summary);
    }
    Ok(rows)
}
