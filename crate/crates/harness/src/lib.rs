//! File formats, replicated experiments and CSV reports for the
//! triangle-count estimators of `esd-core`.

pub mod experiment;
pub mod io;
pub mod metrics;
pub mod report;

pub use experiment::{
    compare, run_experiment, EstimatorSpec, ExperimentConfig, ExperimentError, ExperimentOutput, StreamSpec,
    SummaryRow, TracePoint,
};
pub use report::{emit_csv, read_summary, read_trace, write_summary, write_trace};
