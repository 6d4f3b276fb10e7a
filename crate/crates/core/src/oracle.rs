//! Exact triangle counts, incremental ground truth and the analytic variance
//! bound of the ESD estimator.

use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};
use crate::stream::{EdgeEvent, Sign};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("event {0:?} observed while its edge is absent from the graph")]
    EdgeAbsent(EdgeEvent),
    #[error("deleting ({u}, {v}) would make the triangle count negative")]
    NegativeCount { u: NodeId, v: NodeId },
    #[error("sampling fraction {0} is outside (0, 1]")]
    InvalidAlpha(f64),
}

/// Size of the intersection of two strictly ascending slices.
pub fn sorted_intersection_count(a: &[NodeId], b: &[NodeId]) -> u64 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Number of triangles containing the pair `(u, v)`: `|Γ(u) ∩ Γ(v)|`.
/// The edge itself need not be present.
pub fn triangles_of_edge(g: &Graph, u: NodeId, v: NodeId) -> u64 {
    sorted_intersection_count(g.neighbors(u), g.neighbors(v))
}

/// Exact triangle count: one third of the common-neighbor counts summed over
/// all edges.
pub fn exact_triangles(g: &Graph) -> u64 {
    let per_edge: u64 = g.edges().map(|(u, v)| triangles_of_edge(g, u, v)).sum();
    debug_assert_eq!(per_edge % 3, 0);
    per_edge / 3
}

/// Exact triangle count maintained event by event.
///
/// Ordering contract with the graph:
/// * insertion: call [`observe`](Self::observe) *after* adding the edge;
/// * deletion: call it *before* removing the edge,
///
/// so that in both cases the common neighbors of the endpoints are exactly
/// the triangles the event creates or destroys. [`ExactTracker::replay`]
/// does the ordering for you.
#[derive(Debug, Clone, Default)]
pub struct ExactTracker {
    count: u64,
    max_degree: usize,
    trace: Option<Vec<u64>>,
}

impl ExactTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Also records `|H(e_t, G_t)|` for every event, for [`variance_bound`].
    pub fn with_trace() -> Self {
        Self {
            trace: Some(Vec::new()),
            ..Self::default()
        }
    }

    pub fn observe(&mut self, ev: &EdgeEvent, g: &Graph) -> Result<u64, OracleError> {
        if !g.has_edge(ev.u, ev.v) {
            return Err(OracleError::EdgeAbsent(*ev));
        }
        let h = triangles_of_edge(g, ev.u, ev.v);
        match ev.sign {
            Sign::Insert => self.count += h,
            Sign::Delete => {
                self.count = self
                    .count
                    .checked_sub(h)
                    .ok_or(OracleError::NegativeCount { u: ev.u, v: ev.v })?;
            }
        }
        self.max_degree = self.max_degree.max(g.degree(ev.u)).max(g.degree(ev.v));
        if let Some(trace) = &mut self.trace {
            trace.push(h);
        }
        Ok(self.count)
    }

    /// Applies `ev` to `g` and updates the count in the right order.
    ///
    /// Returns `Ok(None)` without touching anything when the event is
    /// inconsistent with `g` (duplicate insertion or absent deletion).
    pub fn replay(&mut self, ev: &EdgeEvent, g: &mut Graph) -> Result<Option<u64>, OracleError> {
        match ev.sign {
            Sign::Insert => {
                if !g.add_edge(ev.u, ev.v) {
                    return Ok(None);
                }
                self.observe(ev, g).map(Some)
            }
            Sign::Delete => {
                if !g.has_edge(ev.u, ev.v) {
                    return Ok(None);
                }
                let n = self.observe(ev, g)?;
                g.delete_edge(ev.u, ev.v);
                Ok(Some(n))
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Largest endpoint degree seen over all observed events.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Per-event `|H(e_t, G_t)|`, if tracing was requested.
    pub fn trace(&self) -> Option<&[u64]> {
        self.trace.as_deref()
    }
}

/// Upper bound on the variance of the ESD estimate after a stream:
///
/// `N_T·(d_max − 1)/(2α) + (1/(2α) − 1)·Σ_t |H(e_t, G_t)|²`
///
/// `per_event` holds `|H(e_t, G_t)|` for every event (see
/// [`ExactTracker::with_trace`]); `d_max` should dominate every endpoint
/// degree seen while streaming.
pub fn variance_bound(
    per_event: &[u64],
    final_triangles: u64,
    d_max: usize,
    alpha: f64,
) -> Result<f64, OracleError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(OracleError::InvalidAlpha(alpha));
    }
    let sum_sq: f64 = per_event.iter().map(|&h| (h as f64) * (h as f64)).sum();
    let first = final_triangles as f64 * (d_max as f64 - 1.0).max(0.0) / (2.0 * alpha);
    Ok(first + (1.0 / (2.0 * alpha) - 1.0) * sum_sq)
}
