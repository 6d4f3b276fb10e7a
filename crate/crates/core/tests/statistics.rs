//! Monte Carlo checks of unbiasedness, the variance bound and the sampling
//! behavior of the estimators, at sizes that run in a few seconds.

use esd_core::baselines::{Doulion, Triest};
use esd_core::esd::EsdEstimator;
use esd_core::generators::er_graph;
use esd_core::oracle::{exact_triangles, variance_bound, ExactTracker};
use esd_core::rng::{derive_seed, seeded_rng};
use esd_core::stream::{dynamic_edge_deletion_stream, permutation_stream, EdgeEvent};
use esd_core::{Edge, Graph};

fn complete(n: u64) -> Graph {
    Graph::from_edges((0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

struct Summary {
    mean: f64,
    var: f64,
    se: f64,
}

fn summarize(xs: &[f64]) -> Summary {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Summary {
        mean,
        var,
        se: (var / n).sqrt(),
    }
}

/// Runs ESD over a fixed stream `reps` times and returns the final
/// estimates together with the exact final count.
fn esd_runs(stream: &[EdgeEvent], alpha: f64, reps: u64, seed: u64) -> (Vec<f64>, u64) {
    let mut g = Graph::new();
    let mut truth = ExactTracker::new();
    let mut ests: Vec<EsdEstimator> = (0..reps)
        .map(|r| EsdEstimator::dynamic(alpha, seeded_rng(derive_seed(seed, 1, r))).unwrap())
        .collect();
    for ev in stream {
        truth.replay(ev, &mut g).unwrap().expect("consistent");
        for est in &mut ests {
            est.process_event(ev, &g).unwrap();
        }
    }
    (ests.iter().map(EsdEstimator::estimate).collect(), truth.count())
}

fn edges_of(g: &Graph) -> Vec<Edge> {
    g.edges().collect()
}

#[test]
fn esd_unbiased_on_additions() {
    let g = er_graph(150, 0.15, 1).unwrap();
    let stream = permutation_stream(&edges_of(&g), 2).unwrap();
    let (xs, truth) = esd_runs(&stream, 0.2, 600, 3);
    assert_eq!(truth, exact_triangles(&g));
    let s = summarize(&xs);
    assert!((s.mean - truth as f64).abs() <= 3.0 * s.se, "{} vs {truth} (se {})", s.mean, s.se);
}

#[test]
fn esd_unbiased_under_deletions() {
    let g = er_graph(150, 0.15, 4).unwrap();
    let stream = dynamic_edge_deletion_stream(&edges_of(&g), 0.005, 0.1, 5).unwrap();
    assert!(stream.iter().any(|e| !e.is_insert()));
    let (xs, truth) = esd_runs(&stream, 0.2, 600, 6);
    let s = summarize(&xs);
    assert!((s.mean - truth as f64).abs() <= 3.0 * s.se, "{} vs {truth} (se {})", s.mean, s.se);
}

#[test]
fn esd_static_k4() {
    let g = complete(4);
    // alpha = 1: every tuple is observed, the estimate is exactly 4
    let mut est = EsdEstimator::static_graph(1.0, seeded_rng(0)).unwrap();
    for (u, v) in g.edges() {
        est.process_static(u, v, &g).unwrap();
    }
    assert!((est.estimate() - 4.0).abs() < 1e-12);

    let edges = edges_of(&g);
    let xs: Vec<f64> = (0..10_000u64)
        .map(|r| {
            let order = permutation_stream(&edges, r).unwrap();
            let mut est = EsdEstimator::static_graph(0.5, seeded_rng(derive_seed(9, 0, r))).unwrap();
            for ev in &order {
                est.process_static(ev.u, ev.v, &g).unwrap();
            }
            est.estimate()
        })
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - 4.0).abs() <= 3.0 * s.se, "{} (se {})", s.mean, s.se);
}

#[test]
fn esd_k4_variance_below_bound() {
    let stream = permutation_stream(&edges_of(&complete(4)), 11).unwrap();
    let mut g = Graph::new();
    let mut tracker = ExactTracker::with_trace();
    for ev in &stream {
        tracker.replay(ev, &mut g).unwrap();
    }
    let bound = variance_bound(tracker.trace().unwrap(), tracker.count(), tracker.max_degree(), 0.1).unwrap();
    let (xs, truth) = esd_runs(&stream, 0.1, 10_000, 12);
    assert_eq!(truth, 4);
    let s = summarize(&xs);
    assert!(s.var <= bound, "variance {} exceeds bound {bound}", s.var);
}

#[test]
fn chebyshev_consistency() {
    let g = er_graph(80, 0.2, 21).unwrap();
    let stream = permutation_stream(&edges_of(&g), 22).unwrap();
    let (xs, truth) = esd_runs(&stream, 0.1, 2_000, 23);
    let s = summarize(&xs);
    let nt = truth as f64;
    for eps in [0.05, 0.1, 0.2, 0.4] {
        let tail = xs.iter().filter(|&&x| (x - nt).abs() >= eps * nt).count() as f64 / xs.len() as f64;
        let bound = s.var / (eps * eps * nt * nt);
        assert!(tail <= bound * 1.2, "eps {eps}: tail {tail} > {bound}");
    }
}

#[test]
fn halving_alpha_does_not_reduce_variance() {
    let g = er_graph(80, 0.2, 31).unwrap();
    let stream = permutation_stream(&edges_of(&g), 32).unwrap();
    let (hi, _) = esd_runs(&stream, 0.2, 2_000, 33);
    let (lo, _) = esd_runs(&stream, 0.1, 2_000, 34);
    let (v_hi, v_lo) = (summarize(&hi).var, summarize(&lo).var);
    // sampling noise of a variance estimate over 2,000 runs is well under 20%
    assert!(v_lo >= 0.8 * v_hi, "var(0.1) = {v_lo}, var(0.2) = {v_hi}");
}

#[test]
fn doulion_unbiased_on_a_triangle() {
    let stream = [EdgeEvent::insert(1, 2), EdgeEvent::insert(2, 3), EdgeEvent::insert(1, 3)];
    let xs: Vec<f64> = (0..10_000u64)
        .map(|r| {
            let mut d = Doulion::new(0.5, seeded_rng(r)).unwrap();
            stream.iter().for_each(|ev| d.process(ev));
            d.estimate()
        })
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - 1.0).abs() <= 3.0 * s.se, "{} (se {})", s.mean, s.se);
}

#[test]
fn triest_unbiased_on_additions() {
    // ~200 edges with a few hundred triangles
    let g = er_graph(40, 0.26, 41).unwrap();
    let edges = edges_of(&g);
    assert!((180..=230).contains(&edges.len()), "{}", edges.len());
    let truth = exact_triangles(&g) as f64;
    let stream = permutation_stream(&edges, 42).unwrap();
    let capacity = edges.len().div_ceil(2);
    let xs: Vec<f64> = (0..10_000u64)
        .map(|r| {
            let mut t = Triest::new(capacity, seeded_rng(derive_seed(43, 0, r))).unwrap();
            stream.iter().for_each(|ev| t.process(ev));
            t.estimate()
        })
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - truth).abs() <= 3.0 * s.se, "{} vs {truth} (se {})", s.mean, s.se);
}

#[test]
fn doulion_unbiased_on_additions() {
    let g = er_graph(40, 0.26, 41).unwrap();
    let truth = exact_triangles(&g) as f64;
    let stream = permutation_stream(&edges_of(&g), 42).unwrap();
    let xs: Vec<f64> = (0..10_000u64)
        .map(|r| {
            let mut d = Doulion::new(0.5, seeded_rng(derive_seed(44, 0, r))).unwrap();
            stream.iter().for_each(|ev| d.process(ev));
            d.estimate()
        })
        .collect();
    let s = summarize(&xs);
    assert!((s.mean - truth).abs() <= 3.0 * s.se, "{} vs {truth} (se {})", s.mean, s.se);
}

#[test]
fn reservoir_is_uniform_without_deletions() {
    let stream: Vec<EdgeEvent> = (0..20u64).map(|i| EdgeEvent::insert(i, i + 100)).collect();
    let seeds = 10_000u64;
    let capacity = 5;
    let mut hits = [0u32; 20];
    for r in 0..seeds {
        let mut t = Triest::new(capacity, seeded_rng(derive_seed(51, 0, r))).unwrap();
        stream.iter().for_each(|ev| t.process(ev));
        for &(u, _) in t.reservoir() {
            hits[u as usize] += 1;
        }
    }
    let p = capacity as f64 / 20.0;
    let sigma = (seeds as f64 * p * (1.0 - p)).sqrt();
    let expected = seeds as f64 * p;
    let chi2: f64 = hits.iter().map(|&h| (f64::from(h) - expected).powi(2) / expected).sum();
    for (i, &h) in hits.iter().enumerate() {
        assert!((f64::from(h) - expected).abs() <= 4.0 * sigma, "edge {i}: {hits:?}");
    }
    // 20 positions with a fixed total: well inside χ²(19) at p = 0.001
    assert!(chi2 < 43.82, "chi2 {chi2}");
}
