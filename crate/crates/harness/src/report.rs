//! CSV output for summaries and traces.
//!
//! Floats are written in Rust's shortest round-trip form, so reading a file
//! back yields the same values bit for bit. A missing wall-clock time is
//! written as `NA`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::experiment::{SummaryRow, TracePoint};

pub const SUMMARY_HEADER: [&str; 12] = [
    "estimator",
    "alpha_or_p_or_M",
    "replications",
    "truth",
    "mean",
    "rel_err",
    "nrmse",
    "var",
    "ci_low",
    "ci_high",
    "edges_sampled_mean",
    "wall_ms_mean",
];

pub const TRACE_HEADER: [&str; 4] = ["event_index", "truth", "estimator", "estimate"];

const MISSING: &str = "NA";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("cannot access {}", .path.display())]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("record {record}: {message}")]
    Field { record: usize, message: String },
}

pub fn write_summary<W: Write>(rows: &[SummaryRow], w: W) -> Result<(), ReportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(SUMMARY_HEADER)?;
    for r in rows {
        out.write_record([
            r.estimator.clone(),
            r.parameter.to_string(),
            r.replications.to_string(),
            r.truth.to_string(),
            r.mean.to_string(),
            r.rel_err.to_string(),
            r.nrmse.to_string(),
            r.variance.to_string(),
            r.ci_low.to_string(),
            r.ci_high.to_string(),
            r.edges_sampled_mean.to_string(),
            r.wall_ms_mean.map_or_else(|| MISSING.to_string(), |t| t.to_string()),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_trace<W: Write>(points: &[TracePoint], w: W) -> Result<(), ReportError> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRACE_HEADER)?;
    for p in points {
        out.write_record([
            p.event_index.to_string(),
            p.truth.to_string(),
            p.estimator.clone(),
            p.estimate.to_string(),
        ])?;
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, n: usize) -> Result<T, ReportError> {
    let raw = rec.get(i).ok_or_else(|| ReportError::Field {
        record: n,
        message: format!("missing column {i}"),
    })?;
    raw.parse().map_err(|_| ReportError::Field {
        record: n,
        message: format!("cannot parse {raw:?} in column {i}"),
    })
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, want: &[&str]) -> Result<(), ReportError> {
    let got = rdr.headers()?;
    if got.iter().ne(want.iter().copied()) {
        return Err(ReportError::Header(got.iter().map(str::to_string).collect()));
    }
    Ok(())
}

pub fn read_summary<R: Read>(r: R) -> Result<Vec<SummaryRow>, ReportError> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &SUMMARY_HEADER)?;
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let wall = match rec.get(11) {
            Some(MISSING) => None,
            _ => Some(field(&rec, 11, n)?),
        };
        rows.push(SummaryRow {
            estimator: field(&rec, 0, n)?,
            parameter: field(&rec, 1, n)?,
            replications: field(&rec, 2, n)?,
            truth: field(&rec, 3, n)?,
            mean: field(&rec, 4, n)?,
            rel_err: field(&rec, 5, n)?,
            nrmse: field(&rec, 6, n)?,
            variance: field(&rec, 7, n)?,
            ci_low: field(&rec, 8, n)?,
            ci_high: field(&rec, 9, n)?,
            edges_sampled_mean: field(&rec, 10, n)?,
            wall_ms_mean: wall,
        });
    }
    Ok(rows)
}

pub fn read_trace<R: Read>(r: R) -> Result<Vec<TracePoint>, ReportError> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(&mut rdr, &TRACE_HEADER)?;
    let mut points = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        points.push(TracePoint {
            event_index: field(&rec, 0, n)?,
            truth: field(&rec, 1, n)?,
            estimator: field(&rec, 2, n)?,
            estimate: field(&rec, 3, n)?,
        });
    }
    Ok(points)
}

fn create(path: &Path) -> Result<File, ReportError> {
    File::create(path).map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the summary to `path` and, when given, the trace to `trace_path`.
pub fn emit_csv(
    summary: &[SummaryRow],
    trace: &[TracePoint],
    path: &Path,
    trace_path: Option<&Path>,
) -> Result<(), ReportError> {
    write_summary(summary, create(path)?)?;
    if let Some(tp) = trace_path {
        write_trace(trace, create(tp)?)?;
    }
    Ok(())
}
