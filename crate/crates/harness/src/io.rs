//! Text formats: edge lists, event streams and snapshot directories.
//!
//! * Edge list: one edge per line, `u v` separated by whitespace. Further
//!   columns (weights, timestamps) are ignored. Lines starting with `#` or `%`
//!   and blank lines are skipped.
//! * Stream: one event per line, `u v s` with `s` one of `+1` / `-1`
//!   (`1` is accepted for `+1`). `#` comments and blank lines are skipped.
//! * Snapshots: a directory of edge-list files read in lexicographic file
//!   name order.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use esd_core::graph::normalize;
use esd_core::stream::Sign;
use esd_core::{Edge, EdgeEvent, NodeId};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("cannot access {}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl FormatError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        FormatError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Attaches a file name to a parse error.
    fn in_file(self, path: &Path) -> Self {
        match self {
            FormatError::Parse { line, message } => FormatError::Parse {
                line,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        }
    }
}

fn is_comment(line: &str, markers: &[char]) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with(markers)
}

fn parse_node(field: Option<&str>, line: usize) -> Result<NodeId, FormatError> {
    let field = field.ok_or_else(|| FormatError::Parse {
        line,
        message: "expected two node ids".into(),
    })?;
    field.parse().map_err(|_| FormatError::Parse {
        line,
        message: format!("invalid node id {field:?}"),
    })
}

fn read_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader.lines().enumerate().map(|(i, l)| (i + 1, l))
}

pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<Edge>, FormatError> {
    let mut edges = Vec::new();
    for (line, text) in read_lines(reader) {
        let text = text.map_err(|e| FormatError::Parse {
            line,
            message: e.to_string(),
        })?;
        if is_comment(&text, &['#', '%']) {
            continue;
        }
        let mut fields = text.split_whitespace();
        let u = parse_node(fields.next(), line)?;
        let v = parse_node(fields.next(), line)?;
        edges.push((u, v));
    }
    Ok(edges)
}

pub fn read_edge_list(path: &Path) -> Result<Vec<Edge>, FormatError> {
    let f = File::open(path).map_err(|e| FormatError::io(path, e))?;
    parse_edge_list(BufReader::new(f)).map_err(|e| e.in_file(path))
}

pub fn write_edge_list<W: Write>(edges: &[Edge], mut w: W) -> std::io::Result<()> {
    for (u, v) in edges {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()
}

pub fn save_edge_list(edges: &[Edge], path: &Path) -> Result<(), FormatError> {
    let f = File::create(path).map_err(|e| FormatError::io(path, e))?;
    write_edge_list(edges, BufWriter::new(f)).map_err(|e| FormatError::io(path, e))
}

/// Drops self-loops and repeated (in either orientation) edges, keeping the
/// first occurrence and its orientation. Returns the edges and the number
/// dropped.
pub fn simple_edges(raw: &[Edge]) -> (Vec<Edge>, usize) {
    let mut seen = BTreeSet::new();
    let kept: Vec<Edge> = raw
        .iter()
        .copied()
        .filter(|&(u, v)| u != v && seen.insert(normalize((u, v))))
        .collect();
    let dropped = raw.len() - kept.len();
    (kept, dropped)
}

pub fn parse_stream<R: BufRead>(reader: R) -> Result<Vec<EdgeEvent>, FormatError> {
    let mut events = Vec::new();
    for (line, text) in read_lines(reader) {
        let text = text.map_err(|e| FormatError::Parse {
            line,
            message: e.to_string(),
        })?;
        if is_comment(&text, &['#']) {
            continue;
        }
        let mut fields = text.split_whitespace();
        let u = parse_node(fields.next(), line)?;
        let v = parse_node(fields.next(), line)?;
        let sign = match fields.next() {
            Some("+1") | Some("1") => Sign::Insert,
            Some("-1") => Sign::Delete,
            Some(other) => {
                return Err(FormatError::Parse {
                    line,
                    message: format!("sign must be +1 or -1, got {other:?}"),
                })
            }
            None => {
                return Err(FormatError::Parse {
                    line,
                    message: "missing sign column".into(),
                })
            }
        };
        if let Some(extra) = fields.next() {
            return Err(FormatError::Parse {
                line,
                message: format!("unexpected trailing field {extra:?}"),
            });
        }
        if u == v {
            return Err(FormatError::Parse {
                line,
                message: format!("self-loop at node {u}"),
            });
        }
        events.push(EdgeEvent { u, v, sign });
    }
    Ok(events)
}

pub fn read_stream_file(path: &Path) -> Result<Vec<EdgeEvent>, FormatError> {
    let f = File::open(path).map_err(|e| FormatError::io(path, e))?;
    parse_stream(BufReader::new(f)).map_err(|e| e.in_file(path))
}

pub fn write_stream<W: Write>(events: &[EdgeEvent], mut w: W) -> std::io::Result<()> {
    for ev in events {
        writeln!(w, "{} {} {}", ev.u, ev.v, ev.sign)?;
    }
    w.flush()
}

pub fn write_stream_file(events: &[EdgeEvent], path: &Path) -> Result<(), FormatError> {
    let f = File::create(path).map_err(|e| FormatError::io(path, e))?;
    write_stream(events, BufWriter::new(f)).map_err(|e| FormatError::io(path, e))
}

/// Reads every regular file of `dir` as an edge list, in lexicographic file
/// name order.
pub fn read_snapshot_dir(dir: &Path) -> Result<Vec<Vec<Edge>>, FormatError> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| FormatError::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| FormatError::io(dir, e)))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file());
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    files.iter().map(|p| read_edge_list(p)).collect()
}
