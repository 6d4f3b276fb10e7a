//! Edge Sample and Discard (ESD).
//!
//! Each event is sampled with probability `alpha` by a single coin. For a
//! sampled event both endpoints are examined in turn: one random neighbor of
//! the endpoint is drawn from the already-updated graph, and if it closes a
//! triangle with the other endpoint the running estimate moves by the inverse
//! of the tuple's selection probability, times the weight `omega`.
//!
//! | event     | candidates      | tuple probability | step                  |
//! |-----------|-----------------|-------------------|-----------------------|
//! | insertion | `Γ(u) \ {v}`    | `α / (d(u) − 1)`  | `+ω·(d(u) − 1)/α`     |
//! | deletion  | `Γ(u)`          | `α / d(u)`        | `−ω·d(u)/α`           |
//!
//! `omega` is `1/2` for dynamic streams (each new triangle is seen from both
//! endpoints) and `1/6` for static graphs streamed edge by edge (each triangle
//! is seen from all three edges, both directions). Nothing is stored besides
//! the estimate: the graph itself belongs to the caller.

use crate::graph::{Graph, NodeId};
use crate::rng::{Draws, EsdRng};
use crate::stream::{EdgeEvent, Sign};

/// Weight for fully dynamic streams.
pub const DYNAMIC_OMEGA: f64 = 0.5;
/// Weight for a static graph whose edges arrive once each.
pub const STATIC_OMEGA: f64 = 1.0 / 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Dynamic,
    Static,
}

impl Mode {
    pub fn omega(self) -> f64 {
        match self {
            Mode::Dynamic => DYNAMIC_OMEGA,
            Mode::Static => STATIC_OMEGA,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EsdError {
    #[error("sampling fraction {0} is outside (0, 1]")]
    InvalidAlpha(f64),
    #[error("operation requires {expected:?} mode")]
    WrongMode { expected: Mode },
    #[error("graph not updated for {0:?} before processing")]
    GraphNotUpdated(EdgeEvent),
    #[error("edge ({0}, {1}) is not in the static graph")]
    EdgeNotInGraph(NodeId, NodeId),
}

/// Running ESD estimate of the current triangle count.
#[derive(Debug, Clone)]
pub struct EsdEstimator<R = EsdRng> {
    alpha: f64,
    mode: Mode,
    t_est: f64,
    sampled: u64,
    rng: R,
}

impl<R: Draws> EsdEstimator<R> {
    pub fn new(alpha: f64, mode: Mode, rng: R) -> Result<Self, EsdError> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(EsdError::InvalidAlpha(alpha));
        }
        Ok(Self {
            alpha,
            mode,
            t_est: 0.0,
            sampled: 0,
            rng,
        })
    }

    pub fn dynamic(alpha: f64, rng: R) -> Result<Self, EsdError> {
        Self::new(alpha, Mode::Dynamic, rng)
    }

    pub fn static_graph(alpha: f64, rng: R) -> Result<Self, EsdError> {
        Self::new(alpha, Mode::Static, rng)
    }

    /// Processes one stream event. `g` must already reflect it: the edge is
    /// present after an insertion and absent after a deletion.
    pub fn process_event(&mut self, ev: &EdgeEvent, g: &Graph) -> Result<(), EsdError> {
        if self.mode != Mode::Dynamic {
            return Err(EsdError::WrongMode { expected: Mode::Dynamic });
        }
        if g.has_edge(ev.u, ev.v) != ev.is_insert() {
            return Err(EsdError::GraphNotUpdated(*ev));
        }
        if self.rng.coin(self.alpha) {
            self.sampled += 1;
            self.update_count(ev.u, ev.v, ev.sign, g);
            self.update_count(ev.v, ev.u, ev.sign, g);
        }
        Ok(())
    }

    /// Processes one edge of a static graph; `g` is the complete graph and
    /// every edge must be delivered exactly once.
    pub fn process_static(&mut self, u: NodeId, v: NodeId, g: &Graph) -> Result<(), EsdError> {
        if self.mode != Mode::Static {
            return Err(EsdError::WrongMode { expected: Mode::Static });
        }
        if !g.has_edge(u, v) {
            return Err(EsdError::EdgeNotInGraph(u, v));
        }
        if self.rng.coin(self.alpha) {
            self.sampled += 1;
            self.update_count(u, v, Sign::Insert, g);
            self.update_count(v, u, Sign::Insert, g);
        }
        Ok(())
    }

    /// Examines endpoint `u` of the sampled edge `(u, v)` against the
    /// post-event graph.
    pub fn update_count(&mut self, u: NodeId, v: NodeId, sign: Sign, g: &Graph) {
        let d = g.degree(u);
        let omega = self.mode.omega();
        match sign {
            Sign::Insert if d > 1 => {
                if let Some(a) = g.random_neighbor(u, Some(v), &mut self.rng) {
                    if g.has_edge(a, v) {
                        self.t_est += omega * (d - 1) as f64 / self.alpha;
                    }
                }
            }
            Sign::Delete if d > 0 => {
                if let Some(a) = g.random_neighbor(u, None, &mut self.rng) {
                    if g.has_edge(a, v) {
                        self.t_est -= omega * d as f64 / self.alpha;
                    }
                }
            }
            _ => {}
        }
    }
}

impl<R> EsdEstimator<R> {
    /// Current raw estimate. It can be transiently negative after deletions.
    pub fn estimate(&self) -> f64 {
        self.t_est
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn omega(&self) -> f64 {
        self.mode.omega()
    }

    /// Number of events whose sampling coin succeeded.
    pub fn sampled_events(&self) -> u64 {
        self.sampled
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;

    /// Always takes the first candidate; coin succeeds iff `unit() < p`.
    struct Fixed(f64);

    impl Draws for Fixed {
        fn unit(&mut self) -> f64 {
            self.0
        }
        fn index(&mut self, _len: usize) -> usize {
            0
        }
    }

    fn complete(n: u64) -> Graph {
        Graph::from_edges((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(EsdEstimator::dynamic(0.0, Fixed(0.0)).is_err());
        assert!(EsdEstimator::dynamic(1.01, Fixed(0.0)).is_err());
        assert!(EsdEstimator::dynamic(f64::NAN, Fixed(0.0)).is_err());
        assert!(EsdEstimator::dynamic(1.0, Fixed(0.0)).is_ok());
    }

    #[test]
    fn fresh_estimate_is_zero() {
        assert_eq!(EsdEstimator::dynamic(0.3, seeded_rng(0)).unwrap().estimate(), 0.0);
    }

    #[test]
    fn failed_coin_changes_nothing() {
        let g = complete(3);
        let mut est = EsdEstimator::dynamic(0.5, Fixed(0.9)).unwrap();
        est.process_event(&EdgeEvent::insert(0, 2), &g).unwrap();
        assert_eq!(est.estimate(), 0.0);
        assert_eq!(est.sampled_events(), 0);
    }

    #[test]
    fn isolated_new_edge_fails_both_guards() {
        let g = Graph::from_edges([(1, 2)]);
        let mut est = EsdEstimator::dynamic(1.0, Fixed(0.0)).unwrap();
        est.process_event(&EdgeEvent::insert(1, 2), &g).unwrap();
        assert_eq!(est.estimate(), 0.0);
        assert_eq!(est.sampled_events(), 1);
    }

    #[test]
    fn closing_edge_of_a_wedge() {
        // wedge 1-2-3 closed by (1, 3): each direction has a single candidate
        let g = Graph::from_edges([(1, 2), (2, 3), (1, 3)]);
        let mut est = EsdEstimator::dynamic(0.5, Fixed(0.0)).unwrap();
        est.process_event(&EdgeEvent::insert(1, 3), &g).unwrap();
        assert_eq!(est.estimate(), 2.0);
    }

    #[test]
    fn insertion_step_size() {
        // d(u) = 5 after inserting (0, 1); every other neighbor of 0 is
        // adjacent to 1, so the first candidate closes a triangle.
        let g = Graph::from_edges([(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)]);
        let mut est = EsdEstimator::dynamic(0.01, Fixed(0.0)).unwrap();
        est.update_count(0, 1, Sign::Insert, &g);
        assert!((est.estimate() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn deletion_step_size() {
        // (0, 1) already removed; d(0) = 4 and every neighbor of 0 is adjacent to 1.
        let g = Graph::from_edges([(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 3), (1, 4), (1, 5)]);
        let mut est = EsdEstimator::dynamic(0.1, Fixed(0.0)).unwrap();
        est.update_count(0, 1, Sign::Delete, &g);
        assert!((est.estimate() + 20.0).abs() < 1e-9);
    }

    #[test]
    fn deletion_guard_on_empty_neighborhood() {
        let g = Graph::new();
        let mut est = EsdEstimator::dynamic(0.1, Fixed(0.0)).unwrap();
        est.update_count(7, 8, Sign::Delete, &g);
        assert_eq!(est.estimate(), 0.0);
    }

    #[test]
    fn precondition_violations() {
        let g = Graph::from_edges([(1, 2)]);
        let mut est = EsdEstimator::dynamic(1.0, Fixed(0.0)).unwrap();
        assert!(matches!(
            est.process_event(&EdgeEvent::insert(1, 3), &g),
            Err(EsdError::GraphNotUpdated(_))
        ));
        assert!(matches!(
            est.process_event(&EdgeEvent::delete(1, 2), &g),
            Err(EsdError::GraphNotUpdated(_))
        ));
        assert!(matches!(
            est.process_static(1, 2, &g),
            Err(EsdError::WrongMode { .. })
        ));
        let mut st = EsdEstimator::static_graph(1.0, Fixed(0.0)).unwrap();
        assert!(matches!(st.process_static(1, 3, &g), Err(EsdError::EdgeNotInGraph(1, 3))));
        assert!(matches!(
            st.process_event(&EdgeEvent::insert(1, 2), &g),
            Err(EsdError::WrongMode { .. })
        ));
    }

    #[test]
    fn add_then_delete_same_closing_edge_nets_zero() {
        // triangle 0-1-2 plus pendant 2-3; add then delete (0, 1)
        let mut g = Graph::from_edges([(0, 2), (1, 2), (2, 3)]);
        let mut est = EsdEstimator::dynamic(1.0, Fixed(0.0)).unwrap();
        g.add_edge(0, 1);
        est.process_event(&EdgeEvent::insert(0, 1), &g).unwrap();
        let after_add = est.estimate();
        assert_eq!(after_add, 1.0);
        g.delete_edge(0, 1);
        est.process_event(&EdgeEvent::delete(0, 1), &g).unwrap();
        assert_eq!(est.estimate(), 0.0);
    }

    #[test]
    fn static_k3_is_exact() {
        let g = complete(3);
        let mut est = EsdEstimator::static_graph(1.0, seeded_rng(5)).unwrap();
        for (u, v) in g.edges() {
            est.process_static(u, v, &g).unwrap();
        }
        assert!((est.estimate() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn static_star_is_zero() {
        let g = Graph::from_edges((1..=8).map(|l| (0, l)));
        for seed in 0..20 {
            let mut est = EsdEstimator::static_graph(0.7, seeded_rng(seed)).unwrap();
            for (u, v) in g.edges() {
                est.process_static(u, v, &g).unwrap();
            }
            assert_eq!(est.estimate(), 0.0);
        }
    }
}
