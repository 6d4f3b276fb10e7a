//! Triangle-count estimation over fully dynamic edge streams.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the pure
//! algorithmic parts:
//!
//! * [`graph`]: the authoritative dynamic graph with sorted adjacency, which
//!   answers the neighborhood queries the estimator relies on.
//! * [`stream`]: edge events and the synthetic stream models (random
//!   permutation, random edge/node deletion, snapshot differences).
//! * [`generators`]: Erdős–Rényi and power-law preferential attachment graphs.
//! * [`esd`]: the Edge Sample and Discard estimator, dynamic and static.
//! * [`baselines`]: DOULION and TRIÈST-style reservoir estimators.
//! * [`oracle`]: exact counting, incremental ground truth and the analytic
//!   variance bound of the ESD estimator.
//!
//! File formats, metrics and the command-line harness live in the
//! `esd-harness` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
pub mod esd;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod stream;

pub use baselines::{Doulion, Triest};
pub use esd::{EsdEstimator, Mode};
pub use graph::{Edge, Graph, NodeId};
pub use oracle::{exact_triangles, triangles_of_edge, variance_bound, ExactTracker};
pub use rng::{derive_seed, seeded_rng, Draws, EsdRng};
pub use stream::{EdgeEvent, Sign};
