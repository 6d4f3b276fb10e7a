//! Edge events and the synthetic stream models.
//!
//! Every generator returns a stream that is consistent with the graph it
//! builds: replaying it from an empty [`Graph`] never adds an edge twice and
//! never deletes an absent edge.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::SliceRandom;

use crate::graph::{normalize, Edge, Graph, NodeId};
use crate::rng::{seeded_rng, Draws};

/// Direction of an event: `+1` adds the edge, `-1` deletes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Insert,
    Delete,
}

impl Sign {
    /// The numeric β ∈ {+1, −1}.
    pub fn beta(self) -> i8 {
        match self {
            Sign::Insert => 1,
            Sign::Delete => -1,
        }
    }

    pub fn from_beta(beta: i64) -> Option<Self> {
        match beta {
            1 => Some(Sign::Insert),
            -1 => Some(Sign::Delete),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Insert => "+1",
            Sign::Delete => "-1",
        })
    }
}

/// One stream element `((u, v), β)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEvent {
    pub u: NodeId,
    pub v: NodeId,
    pub sign: Sign,
}

impl EdgeEvent {
    pub fn insert(u: NodeId, v: NodeId) -> Self {
        Self { u, v, sign: Sign::Insert }
    }

    pub fn delete(u: NodeId, v: NodeId) -> Self {
        Self { u, v, sign: Sign::Delete }
    }

    pub fn is_insert(&self) -> bool {
        self.sign == Sign::Insert
    }

    pub fn edge(&self) -> Edge {
        (self.u, self.v)
    }

    /// Applies the event to `g`. Returns `false` (and leaves `g` unchanged)
    /// for a duplicate insertion or an absent deletion.
    pub fn apply(&self, g: &mut Graph) -> bool {
        match self.sign {
            Sign::Insert => g.add_edge(self.u, self.v),
            Sign::Delete => g.delete_edge(self.u, self.v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StreamError {
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(NodeId, NodeId),
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
}

fn check_probability(p: f64) -> Result<(), StreamError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(StreamError::InvalidProbability(p))
    }
}

fn check_simple(edges: &[Edge]) -> Result<(), StreamError> {
    let mut seen = BTreeSet::new();
    for &(u, v) in edges {
        if u == v {
            return Err(StreamError::SelfLoop(u));
        }
        if !seen.insert(normalize((u, v))) {
            return Err(StreamError::DuplicateEdge(u, v));
        }
    }
    Ok(())
}

fn shuffled(edges: &[Edge], seed: u64) -> Vec<Edge> {
    let mut order = edges.to_vec();
    order.shuffle(&mut seeded_rng(seed));
    order
}

/// Every edge once as an insertion, in a uniformly random order fixed by
/// `seed`.
pub fn permutation_stream(edges: &[Edge], seed: u64) -> Result<Vec<EdgeEvent>, StreamError> {
    check_simple(edges)?;
    Ok(shuffled(edges, seed)
        .into_iter()
        .map(|(u, v)| EdgeEvent::insert(u, v))
        .collect())
}

/// Random permutation of insertions interleaved with random edge deletions.
///
/// After each insertion a deletion event fires with probability `p_e`; it
/// deletes every edge currently present independently with probability
/// `p_d`, emitting the deletions contiguously in ascending `(u, v)` order.
/// Deleted edges never come back.
pub fn dynamic_edge_deletion_stream(
    edges: &[Edge],
    p_e: f64,
    p_d: f64,
    seed: u64,
) -> Result<Vec<EdgeEvent>, StreamError> {
    check_probability(p_e)?;
    check_probability(p_d)?;
    check_simple(edges)?;
    let order = shuffled(edges, seed);
    // independent generator for the deletion process
    let mut rng = seeded_rng(seed ^ 0xd1b5_4a32_d192_ed03);
    let mut present = BTreeSet::new();
    let mut out = Vec::with_capacity(order.len());
    for (u, v) in order {
        out.push(EdgeEvent::insert(u, v));
        present.insert(normalize((u, v)));
        if rng.coin(p_e) {
            let doomed: Vec<Edge> = present.iter().copied().filter(|_| rng.coin(p_d)).collect();
            for e in doomed {
                present.remove(&e);
                out.push(EdgeEvent::delete(e.0, e.1));
            }
        }
    }
    Ok(out)
}

/// Random permutation of insertions interleaved with random node deletions.
///
/// A deletion event marks each node of positive degree independently with
/// probability `p_d` (in ascending id order) and then deletes every edge
/// incident to a marked node, once, in ascending `(u, v)` order.
pub fn dynamic_node_deletion_stream(
    edges: &[Edge],
    p_e: f64,
    p_d: f64,
    seed: u64,
) -> Result<Vec<EdgeEvent>, StreamError> {
    check_probability(p_e)?;
    check_probability(p_d)?;
    check_simple(edges)?;
    let order = shuffled(edges, seed);
    let mut rng = seeded_rng(seed ^ 0xd1b5_4a32_d192_ed03);
    let mut g = Graph::new();
    let mut out = Vec::with_capacity(order.len());
    for (u, v) in order {
        g.add_edge(u, v);
        out.push(EdgeEvent::insert(u, v));
        if rng.coin(p_e) {
            let marked: Vec<NodeId> = g
                .nodes()
                .filter(|&n| g.degree(n) > 0)
                .collect::<Vec<_>>()
                .into_iter()
                .filter(|_| rng.coin(p_d))
                .collect();
            for (a, b) in incident_edges(&g, &marked) {
                g.delete_edge(a, b);
                out.push(EdgeEvent::delete(a, b));
            }
        }
    }
    Ok(out)
}

/// Every edge touching a node of `marked`, once, in ascending order.
fn incident_edges(g: &Graph, marked: &[NodeId]) -> BTreeSet<Edge> {
    marked
        .iter()
        .flat_map(|&n| g.neighbors(n).iter().map(move |&m| normalize((n, m))))
        .collect()
}

/// Turns an ordered list of snapshots into the events between them, starting
/// from the empty graph.
///
/// For each consecutive pair the edges that vanished are emitted as
/// deletions first, then the new edges as insertions, each group in
/// ascending `(u, v)` order.
pub fn snapshot_diff_stream(snapshots: &[Vec<Edge>]) -> Result<Vec<EdgeEvent>, StreamError> {
    let mut prev: BTreeSet<Edge> = BTreeSet::new();
    let mut out = Vec::new();
    for snap in snapshots {
        check_simple(snap)?;
        let next: BTreeSet<Edge> = snap.iter().map(|&e| normalize(e)).collect();
        out.extend(prev.difference(&next).map(|&(u, v)| EdgeEvent::delete(u, v)));
        out.extend(next.difference(&prev).map(|&(u, v)| EdgeEvent::insert(u, v)));
        prev = next;
    }
    Ok(out)
}
