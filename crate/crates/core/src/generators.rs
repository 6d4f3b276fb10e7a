//! Synthetic graphs: Erdős–Rényi seeds and power-law preferential attachment.

use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};
use crate::oracle::exact_triangles;
use crate::rng::{seeded_rng, Draws};

/// Growth parameters for [`ba_graph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaConfig {
    /// Final number of nodes, seed included.
    pub n_total: usize,
    /// Nodes in the initial Erdős–Rényi graph.
    pub seed_nodes: usize,
    /// Edge probability of the initial Erdős–Rényi graph.
    pub seed_edge_prob: f64,
    /// Edges created by every new node.
    pub edges_per_new_node: usize,
    /// Attachment exponent: an existing node `i` is picked with probability
    /// proportional to `d_i^gamma`.
    pub gamma: f64,
    pub seed: u64,
}

impl BaConfig {
    pub fn new(n_total: usize, edges_per_new_node: usize, gamma: f64, seed: u64) -> Self {
        Self {
            n_total,
            seed_nodes: 100,
            seed_edge_prob: 0.1,
            edges_per_new_node,
            gamma,
            seed,
        }
    }

    /// Presets shaped like the six large power-law graphs (20,000 nodes,
    /// 100-node seed). The per-node edge counts are inferred from their edge
    /// totals; `index` is 1-based.
    pub fn preset(index: usize, seed: u64) -> Option<Self> {
        let (gamma, m) = match index {
            1 => (1.5, 10),
            2 => (1.5, 20),
            3 => (1.5, 50),
            4 => (1.0, 74),
            5 => (1.5, 38),
            6 => (2.0, 30),
            _ => return None,
        };
        Some(Self::new(20_000, m, gamma, seed))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("attachment exponent must be finite and non-negative, got {0}")]
    InvalidGamma(f64),
    #[error("edges_per_new_node must be positive")]
    ZeroAttachment,
    #[error("seed_nodes ({seed_nodes}) exceeds n_total ({n_total})")]
    SeedLargerThanGraph { seed_nodes: usize, n_total: usize },
    #[error("node {node} needs {needed} attachment targets but only {available} are selectable")]
    InfeasibleAttachment {
        node: NodeId,
        needed: usize,
        available: usize,
    },
}

/// Erdős–Rényi graph on nodes `0..n`: each unordered pair is present
/// independently with probability `edge_prob`. Isolated nodes are kept.
pub fn er_graph(n: usize, edge_prob: f64, seed: u64) -> Result<Graph, GeneratorError> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(GeneratorError::InvalidProbability(edge_prob));
    }
    let mut rng = seeded_rng(seed);
    let mut g = Graph::new();
    for u in 0..n as NodeId {
        g.add_node(u);
        for v in u + 1..n as NodeId {
            if rng.coin(edge_prob) {
                g.add_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// Weighted sampling without replacement by cumulative-weight inversion.
///
/// Drawn items are rejected and redrawn; after a run of rejections the
/// cumulative table is rebuilt without them so heavy items cannot stall the
/// batch.
#[derive(Debug, Clone)]
pub struct PreferentialSampler {
    weights: Vec<f64>,
    cumulative: Vec<f64>,
    taken: Vec<bool>,
    available: usize,
}

const MAX_REJECTIONS: usize = 16;

impl PreferentialSampler {
    pub fn new(weights: Vec<f64>) -> Self {
        let taken = alloc::vec![false; weights.len()];
        let available = weights.iter().filter(|&&w| w > 0.0).count();
        let mut s = Self {
            weights,
            cumulative: Vec::new(),
            taken,
            available,
        };
        s.rebuild();
        s
    }

    fn rebuild(&mut self) {
        let mut acc = 0.0;
        self.cumulative.clear();
        for (w, &t) in self.weights.iter().zip(&self.taken) {
            if !t {
                acc += w;
            }
            self.cumulative.push(acc);
        }
    }

    fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Number of items with positive weight that have not been taken.
    pub fn available(&self) -> usize {
        self.available
    }

    fn invert<R: Draws + ?Sized>(&self, rng: &mut R) -> usize {
        let x = rng.unit() * self.total();
        let i = self.cumulative.partition_point(|&c| c <= x);
        i.min(self.cumulative.len() - 1)
    }

    /// Draws one item with probability proportional to its weight among the
    /// items not yet taken, and marks it taken. `None` when nothing is left.
    pub fn take<R: Draws + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if self.available == 0 {
            return None;
        }
        let mut rejections = 0;
        loop {
            let i = self.invert(rng);
            if !self.taken[i] && self.weights[i] > 0.0 {
                self.taken[i] = true;
                self.available -= 1;
                return Some(i);
            }
            rejections += 1;
            if rejections == MAX_REJECTIONS {
                self.rebuild();
                rejections = 0;
            }
        }
    }

    /// Draws with replacement (nothing is marked taken).
    pub fn pick<R: Draws + ?Sized>(&self, rng: &mut R) -> usize {
        self.invert(rng)
    }
}

/// Power-law preferential attachment graph.
///
/// Starts from `er_graph(seed_nodes, seed_edge_prob)`; then nodes
/// `seed_nodes..n_total` arrive one at a time and each connects to
/// `edges_per_new_node` distinct existing nodes. Within one arrival, targets
/// are drawn without replacement with probability proportional to
/// `degree^gamma`, using the degrees from before the arrival.
pub fn ba_graph(cfg: &BaConfig) -> Result<Graph, GeneratorError> {
    if !(cfg.gamma.is_finite() && cfg.gamma >= 0.0) {
        return Err(GeneratorError::InvalidGamma(cfg.gamma));
    }
    if cfg.edges_per_new_node == 0 {
        return Err(GeneratorError::ZeroAttachment);
    }
    if cfg.seed_nodes > cfg.n_total {
        return Err(GeneratorError::SeedLargerThanGraph {
            seed_nodes: cfg.seed_nodes,
            n_total: cfg.n_total,
        });
    }
    let mut g = er_graph(cfg.seed_nodes, cfg.seed_edge_prob, cfg.seed)?;
    let mut rng = seeded_rng(crate::rng::derive_seed(cfg.seed, 0xba, 0));
    let weight = |d: usize| libm::pow(d as f64, cfg.gamma);
    let mut weights: Vec<f64> = (0..cfg.seed_nodes as NodeId)
        .map(|u| weight(g.degree(u)))
        .collect();
    for new in cfg.seed_nodes as NodeId..cfg.n_total as NodeId {
        let mut sampler = PreferentialSampler::new(weights.clone());
        let available = sampler.available();
        if available < cfg.edges_per_new_node {
            return Err(GeneratorError::InfeasibleAttachment {
                node: new,
                needed: cfg.edges_per_new_node,
                available,
            });
        }
        g.add_node(new);
        for _ in 0..cfg.edges_per_new_node {
            let target = sampler.take(&mut rng).expect("checked availability") as NodeId;
            g.add_edge(new, target);
        }
        for &t in g.neighbors(new) {
            weights[t as usize] = weight(g.degree(t));
        }
        weights.push(weight(g.degree(new)));
    }
    Ok(g)
}

/// Size and transitivity summary of a graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub triangles: u64,
    /// Paths of length two: Σ_v C(d(v), 2).
    pub wedges: u64,
    /// 3·triangles / wedges (0 when there are no wedges).
    pub clustering: f64,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    let wedges: u64 = g
        .nodes()
        .map(|u| {
            let d = g.degree(u) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    let triangles = exact_triangles(g);
    let clustering = if wedges == 0 {
        0.0
    } else {
        3.0 * triangles as f64 / wedges as f64
    };
    GraphStats {
        nodes: g.node_count(),
        edges: g.edge_count(),
        triangles,
        wedges,
        clustering,
    }
}
