//! Mutable undirected simple graph with sorted adjacency.
//!
//! This is the dataset the estimator queries: it is kept up to date with every
//! event of the stream, and answers degree, membership and random-neighbor
//! queries. Neighbor lists are strictly ascending vectors, so membership is a
//! binary search (`O(log d)`) and insertion/removal is `O(d)`.
//!
//! Nodes whose last edge is deleted stay in the map with an empty neighbor
//! list until [`Graph::compact`] is called. A zero-degree node answers every
//! query exactly like an unknown node.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::rng::Draws;

/// Node identifier. Any 64-bit value is valid; ids need not be dense.
pub type NodeId = u64;

/// An undirected edge as a pair of endpoints.
pub type Edge = (NodeId, NodeId);

/// Returns the edge with its endpoints in ascending order.
#[inline]
pub fn normalize((u, v): Edge) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Structural defect found by [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("node {0} lists itself as a neighbor")]
    SelfLoop(NodeId),
    #[error("neighbors of node {0} are not strictly ascending")]
    Unsorted(NodeId),
    #[error("edge ({0}, {1}) is only recorded on one side")]
    Asymmetric(NodeId, NodeId),
    #[error("edge count {recorded} disagrees with adjacency ({actual})")]
    EdgeCount { recorded: usize, actual: usize },
}

/// Undirected simple graph.
#[derive(Clone, Default)]
pub struct Graph {
    adj: BTreeMap<NodeId, Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list, silently skipping self-loops and
    /// repeated edges.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        let mut g = Self::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Registers `u` without edges.
    pub fn add_node(&mut self, u: NodeId) {
        self.adj.entry(u).or_default();
    }

    /// Inserts the undirected edge `(u, v)`.
    ///
    /// Returns `false` and leaves the graph untouched for self-loops and edges
    /// that are already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        let nu = self.adj.entry(u).or_default();
        let pos = match nu.binary_search(&v) {
            Ok(_) => return false,
            Err(pos) => pos,
        };
        nu.insert(pos, v);
        let nv = self.adj.entry(v).or_default();
        match nv.binary_search(&u) {
            Ok(_) => unreachable!("adjacency out of sync for ({u}, {v})"),
            Err(pos) => nv.insert(pos, u),
        }
        self.edge_count += 1;
        true
    }

    /// Removes the undirected edge `(u, v)`. Returns `false` if it is absent.
    pub fn delete_edge(&mut self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        let Some(nu) = self.adj.get_mut(&u) else {
            return false;
        };
        let Ok(pos) = nu.binary_search(&v) else {
            return false;
        };
        nu.remove(pos);
        let nv = self
            .adj
            .get_mut(&v)
            .expect("adjacency out of sync: missing reverse list");
        let pos = nv
            .binary_search(&u)
            .expect("adjacency out of sync: missing reverse entry");
        nv.remove(pos);
        self.edge_count -= 1;
        true
    }

    /// Sorted neighbors of `u`; empty for unknown nodes.
    ///
    /// The returned slice borrows the graph, so it cannot be invalidated by a
    /// later mutation. Call `.to_vec()` to keep a copy across mutations.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        self.adj.get(&u).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.neighbors(u).len()
    }

    /// Membership test by binary search over the shorter neighbor list.
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        if u == v {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Draws a neighbor of `u` uniformly from `Γ(u) \ {exclude}`.
    ///
    /// Consumes exactly one [`Draws::index`] call when the candidate set is
    /// non-empty and none otherwise.
    pub fn random_neighbor<R: Draws + ?Sized>(
        &self,
        u: NodeId,
        exclude: Option<NodeId>,
        rng: &mut R,
    ) -> Option<NodeId> {
        let nbrs = self.neighbors(u);
        let skip = exclude.and_then(|x| nbrs.binary_search(&x).ok());
        let candidates = nbrs.len() - usize::from(skip.is_some());
        if candidates == 0 {
            return None;
        }
        let mut i = rng.index(candidates);
        if let Some(s) = skip {
            if i >= s {
                i += 1;
            }
        }
        Some(nbrs[i])
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Number of nodes known to the graph, including zero-degree ones that
    /// have not been compacted away.
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Largest degree in the graph (0 for an empty graph).
    pub fn max_degree(&self) -> usize {
        self.adj.values().map(Vec::len).max().unwrap_or(0)
    }

    /// All known nodes in ascending order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    /// Every edge once, as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Drops nodes with no remaining neighbors.
    pub fn compact(&mut self) {
        self.adj.retain(|_, nbrs| !nbrs.is_empty());
    }

    /// Full scan of the structural invariants: no self-loops, strictly sorted
    /// neighbor lists, symmetric adjacency and a consistent edge count.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut degree_sum = 0;
        for (&u, nbrs) in &self.adj {
            degree_sum += nbrs.len();
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::Unsorted(u));
            }
            for &v in nbrs {
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return Err(GraphError::Asymmetric(u, v));
                }
            }
        }
        if degree_sum != 2 * self.edge_count {
            return Err(GraphError::EdgeCount {
                recorded: self.edge_count,
                actual: degree_sum / 2,
            });
        }
        Ok(())
    }
}

/// Two graphs are equal when they have the same edge set; retained
/// zero-degree nodes are ignored.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.edge_count == other.edge_count && self.edges().eq(other.edges())
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.adj.len())
            .field("edges", &self.edge_count)
            .finish()
    }
}
