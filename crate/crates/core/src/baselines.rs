//! Sample-graph baselines: DOULION (Bernoulli edge sparsification) and a
//! TRIÈST-style fixed-size reservoir with random pairing for deletions.
//!
//! Both keep the triangle count of their sample graph up to date on every
//! change, so an estimate is available after any event.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::graph::{normalize, Edge, Graph};
use crate::oracle::triangles_of_edge;
use crate::rng::{Draws, EsdRng};
use crate::stream::{EdgeEvent, Sign};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BaselineError {
    #[error("sampling probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("reservoir capacity must be positive")]
    ZeroCapacity,
}

/// DOULION: keep each inserted edge with probability `p` and scale the
/// sample's triangle count by `p⁻³`.
#[derive(Debug, Clone)]
pub struct Doulion<R = EsdRng> {
    p: f64,
    sample: Graph,
    triangles: u64,
    admitted: u64,
    rng: R,
}

impl<R: Draws> Doulion<R> {
    pub fn new(p: f64, rng: R) -> Result<Self, BaselineError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(BaselineError::InvalidProbability(p));
        }
        Ok(Self {
            p,
            sample: Graph::new(),
            triangles: 0,
            admitted: 0,
            rng,
        })
    }

    pub fn process(&mut self, ev: &EdgeEvent) {
        match ev.sign {
            Sign::Insert => {
                if self.rng.coin(self.p) && self.sample.add_edge(ev.u, ev.v) {
                    self.admitted += 1;
                    self.triangles += triangles_of_edge(&self.sample, ev.u, ev.v);
                }
            }
            Sign::Delete => {
                if self.sample.has_edge(ev.u, ev.v) {
                    self.triangles -= triangles_of_edge(&self.sample, ev.u, ev.v);
                    self.sample.delete_edge(ev.u, ev.v);
                }
            }
        }
    }
}

impl<R> Doulion<R> {
    pub fn estimate(&self) -> f64 {
        if self.p == 0.0 {
            return 0.0;
        }
        self.triangles as f64 / (self.p * self.p * self.p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Exact triangle count of the current sample graph.
    pub fn sample_triangles(&self) -> u64 {
        self.triangles
    }

    pub fn sample_graph(&self) -> &Graph {
        &self.sample
    }

    /// Insertions admitted into the sample so far.
    pub fn edges_sampled(&self) -> u64 {
        self.admitted
    }
}

/// Fixed-capacity edge reservoir with random pairing.
///
/// Without outstanding deletions an insertion follows classic reservoir
/// sampling over the current stream size `s`. A deletion removes the edge
/// from the reservoir if present and is remembered as *bad* (it hit the
/// sample) or *good* (it did not); later insertions first pay back those
/// deletions, entering the sample with probability `bad / (bad + good)`.
#[derive(Debug, Clone)]
pub struct Triest<R = EsdRng> {
    capacity: usize,
    sample: Graph,
    reservoir: Vec<Edge>,
    slot: BTreeMap<Edge, usize>,
    tau: u64,
    /// Current number of edges in the streamed graph.
    s: u64,
    additions: u64,
    c_bad: u64,
    c_good: u64,
    rng: R,
}

impl<R: Draws> Triest<R> {
    pub fn new(capacity: usize, rng: R) -> Result<Self, BaselineError> {
        if capacity == 0 {
            return Err(BaselineError::ZeroCapacity);
        }
        Ok(Self {
            capacity,
            sample: Graph::new(),
            reservoir: Vec::with_capacity(capacity),
            slot: BTreeMap::new(),
            tau: 0,
            s: 0,
            additions: 0,
            c_bad: 0,
            c_good: 0,
            rng,
        })
    }

    pub fn process(&mut self, ev: &EdgeEvent) {
        let e = normalize(ev.edge());
        match ev.sign {
            Sign::Insert => {
                self.s += 1;
                self.additions += 1;
                let pending = self.c_bad + self.c_good;
                if pending == 0 {
                    if self.reservoir.len() < self.capacity {
                        self.insert(e);
                    } else if self.rng.coin(self.capacity as f64 / self.s as f64) {
                        let victim = self.reservoir[self.rng.index(self.reservoir.len())];
                        self.remove(victim);
                        self.insert(e);
                    }
                } else if self.rng.coin(self.c_bad as f64 / pending as f64) {
                    self.c_bad -= 1;
                    self.insert(e);
                } else {
                    self.c_good -= 1;
                }
            }
            Sign::Delete => {
                if self.slot.contains_key(&e) {
                    self.s = self.s.saturating_sub(1);
                    self.remove(e);
                    self.c_bad += 1;
                } else if self.s > 0 {
                    self.s -= 1;
                    self.c_good += 1;
                }
            }
        }
    }

    fn insert(&mut self, e: Edge) {
        if self.sample.add_edge(e.0, e.1) {
            self.tau += triangles_of_edge(&self.sample, e.0, e.1);
            self.slot.insert(e, self.reservoir.len());
            self.reservoir.push(e);
        }
    }

    fn remove(&mut self, e: Edge) {
        let Some(i) = self.slot.remove(&e) else {
            return;
        };
        self.tau -= triangles_of_edge(&self.sample, e.0, e.1);
        self.sample.delete_edge(e.0, e.1);
        self.reservoir.swap_remove(i);
        if let Some(&moved) = self.reservoir.get(i) {
            self.slot.insert(moved, i);
        }
    }
}

impl<R> Triest<R> {
    /// `tau · max(1, s(s−1)(s−2) / (M'(M'−1)(M'−2)))` with `M' = min(M, s)`.
    pub fn estimate(&self) -> f64 {
        let s = self.s as f64;
        let m = self.capacity.min(self.s as usize) as f64;
        let scale = if m < 3.0 {
            1.0
        } else {
            (s * (s - 1.0) * (s - 2.0) / (m * (m - 1.0) * (m - 2.0))).max(1.0)
        };
        self.tau as f64 * scale
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Exact triangle count of the reservoir graph.
    pub fn tau(&self) -> u64 {
        self.tau
    }

    pub fn sample_graph(&self) -> &Graph {
        &self.sample
    }

    pub fn reservoir_len(&self) -> usize {
        self.reservoir.len()
    }

    pub fn reservoir(&self) -> &[Edge] {
        &self.reservoir
    }

    /// Current size of the streamed graph as tracked from the events.
    pub fn stream_edges(&self) -> u64 {
        self.s
    }

    pub fn additions(&self) -> u64 {
        self.additions
    }

    /// Outstanding `(bad, good)` deletions awaiting compensation.
    pub fn pairing_counters(&self) -> (u64, u64) {
        (self.c_bad, self.c_good)
    }
}
