use std::fs;
use std::process::Command;

use esd_core::generators::{ba_graph, er_graph, BaConfig};
use esd_core::Edge;
use esd_harness::experiment::{run_experiment, EstimatorSpec, ExperimentConfig, StreamSpec};
use esd_harness::{read_summary, read_trace, write_summary, write_trace};

fn er_edges(n: usize, p: f64, seed: u64) -> Vec<Edge> {
    er_graph(n, p, seed).unwrap().edges().collect()
}

fn csv_bytes(cfg: &ExperimentConfig) -> (Vec<u8>, Vec<u8>) {
    let out = run_experiment(cfg).unwrap();
    let (mut s, mut t) = (Vec::new(), Vec::new());
    write_summary(&out.summary, &mut s).unwrap();
    write_trace(&out.trace, &mut t).unwrap();
    (s, t)
}

#[test]
fn same_config_same_bytes() {
    let cfg = ExperimentConfig::new(
        StreamSpec::EdgeDeletion {
            edges: er_edges(60, 0.2, 1),
            p_e: 0.05,
            p_d: 0.1,
        },
        vec![
            EstimatorSpec::Esd { alpha: 0.3 },
            EstimatorSpec::Doulion { p: 0.3 },
            EstimatorSpec::Triest { capacity: 100 },
        ],
        16,
        99,
    );
    let a = csv_bytes(&cfg);
    let b = csv_bytes(&cfg);
    assert_eq!(a, b);

    let mut other = cfg.clone();
    other.seed = 100;
    assert_ne!(csv_bytes(&other).0, a.0);

    let out = run_experiment(&cfg).unwrap();
    assert_eq!(read_summary(a.0.as_slice()).unwrap(), out.summary);
    assert_eq!(read_trace(a.1.as_slice()).unwrap(), out.trace);
}

#[test]
fn sample_size_accounting() {
    let edges = er_edges(100, 0.1, 2);
    let cfg = ExperimentConfig::new(
        StreamSpec::EdgeDeletion { edges, p_e: 0.01, p_d: 0.1 },
        vec![EstimatorSpec::Esd { alpha: 0.2 }, EstimatorSpec::Doulion { p: 0.3 }],
        400,
        3,
    );
    let out = run_experiment(&cfg).unwrap();
    let events = cfg.stream.realize(esd_core::rng::derive_seed(3, 0, 0)).unwrap();
    assert_eq!(events.len(), out.events);
    let additions = events.iter().filter(|e| e.is_insert()).count() as f64;
    let n = out.events as f64;
    let r = cfg.replications as f64;
    for (row, trials, q) in [(&out.summary[0], n, 0.2), (&out.summary[1], additions, 0.3)] {
        let sigma = (trials * q * (1.0 - q) / r).sqrt();
        assert!(
            (row.edges_sampled_mean - q * trials).abs() <= 3.0 * sigma,
            "{}: {} vs {}",
            row.estimator,
            row.edges_sampled_mean,
            q * trials
        );
    }
}

#[test]
fn timing_is_reported_only_when_asked() {
    let mut cfg = ExperimentConfig::new(
        StreamSpec::Permutation { edges: er_edges(30, 0.3, 4) },
        vec![EstimatorSpec::Esd { alpha: 0.5 }],
        2,
        5,
    );
    assert_eq!(run_experiment(&cfg).unwrap().summary[0].wall_ms_mean, None);
    cfg.timing = true;
    let t = run_experiment(&cfg).unwrap().summary[0].wall_ms_mean.unwrap();
    assert!(t >= 0.0);
}

#[test]
fn metrics_are_consistent() {
    let cfg = ExperimentConfig::new(
        StreamSpec::Permutation { edges: er_edges(50, 0.3, 6) },
        vec![EstimatorSpec::Esd { alpha: 0.3 }, EstimatorSpec::Triest { capacity: 150 }],
        50,
        7,
    );
    let out = run_experiment(&cfg).unwrap();
    for (row, xs) in out.summary.iter().zip(&out.estimates) {
        assert!(row.nrmse >= 0.0);
        assert!(row.ci_half_width() >= 0.0);
        assert!((row.mean - xs.iter().sum::<f64>() / xs.len() as f64).abs() < 1e-9);
        assert!(row.ci_low <= row.mean && row.mean <= row.ci_high);
    }
}

fn esd_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_esd"))
}

#[test]
fn cli_pipeline_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let graph = d.join("g.txt");
    let stream = d.join("s.txt");
    let status = esd_bin()
        .args(["generate", "ba", "--nodes", "300", "--m", "4", "--seed", "1", "--out"])
        .arg(&graph)
        .status()
        .unwrap();
    assert!(status.success());
    let cfg = BaConfig::new(300, 4, 1.5, 1);
    let expected: Vec<Edge> = ba_graph(&cfg).unwrap().edges().collect();
    assert_eq!(esd_harness::io::read_edge_list(&graph).unwrap(), expected);

    let status = esd_bin()
        .args(["stream", "--pe", "0.02", "--pd", "0.1", "--seed", "2", "--input"])
        .arg(&graph)
        .arg("--out")
        .arg(&stream)
        .status()
        .unwrap();
    assert!(status.success());

    let run = |tag: &str| {
        let summary = d.join(format!("summary-{tag}.csv"));
        let trace = d.join(format!("trace-{tag}.csv"));
        let status = esd_bin()
            .args(["run", "--alpha", "0.2", "--p", "0.2", "--reservoir", "200", "--reps", "8", "--seed", "3"])
            .arg("--stream")
            .arg(&stream)
            .arg("--out")
            .arg(&summary)
            .arg("--trace")
            .arg(&trace)
            .status()
            .unwrap();
        assert!(status.success());
        (fs::read(summary).unwrap(), fs::read(trace).unwrap())
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    let text = String::from_utf8(first.0).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.split(',').count() == 12));
    assert!(String::from_utf8(first.1).unwrap().lines().all(|l| l.split(',').count() == 4));

    let exact = esd_bin().arg("exact").arg("--stream").arg(&stream).output().unwrap();
    assert!(exact.status.success());
    let truth = read_summary(text.as_bytes()).unwrap()[0].truth;
    let stdout = String::from_utf8(exact.stdout).unwrap();
    assert!(stdout.contains(&format!("triangles {truth}")), "{stdout}");
}

#[test]
fn cli_errors_exit_nonzero() {
    let out = esd_bin()
        .args(["run", "--alpha", "0.1", "--stream", "/nonexistent/s.txt"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/s.txt"));

    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    fs::write(&g, "1 2\n2 3\n").unwrap();
    for args in [
        vec!["run", "--reps", "4"],
        vec!["run", "--alpha", "1.5"],
        vec!["run", "--alpha", "0.5", "--reps", "0"],
        vec!["run", "--alpha", "0.5", "--pe", "0.1"],
    ] {
        let out = esd_bin().args(&args).arg("--input").arg(&g).output().unwrap();
        assert!(!out.status.success(), "{args:?} should fail");
    }
}
