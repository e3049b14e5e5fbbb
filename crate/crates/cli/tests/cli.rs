use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use robrep_cli::artifacts::{BenchFile, DetectionFile, ReportFile, TruthFile};
use robrep_cli::{format_matrix_csv, parse_matrix_csv, read_matrix_csv, write_matrix_csv};
use robrep_core::DenseMatrix;
use serde::de::DeserializeOwned;
use serde_json::Value;

fn robrep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robrep"))
        .args(args)
        .args(["--out", dir.to_str().unwrap()])
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = robrep(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is one JSON object")
}

fn load<T: DeserializeOwned>(path: impl AsRef<Path>) -> T {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn csv_file_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    write_matrix_csv(&DenseMatrix::zeros(1, 1), &p).unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), "0\n");
    write_matrix_csv(&DenseMatrix::identity(2), &p).unwrap();
    assert_eq!(fs::read_to_string(&p).unwrap(), "1,0\n0,1\n");
    assert_eq!(read_matrix_csv(&p).unwrap(), DenseMatrix::identity(2));
}

fn finite_entry() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3..1e3f64,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        Just(0.0),
        Just(-0.0),
    ]
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(
        (rows, cols, data) in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(finite_entry(), r * c))
        })
    ) {
        let m = DenseMatrix::from_row_slice(rows, cols, &data).unwrap();
        let text = format_matrix_csv(&m);
        let back = parse_matrix_csv(&text).unwrap();
        prop_assert_eq!(back.shape(), (rows, cols));
        for (a, b) in m.to_row_major().iter().zip(back.to_row_major()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(format_matrix_csv(&back), text);
    }
}

#[test]
fn noiseless_instance_is_fit_closely_by_irls() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "generate",
            "--seed",
            "4",
            "--corruption-fraction",
            "0",
            "--noise-sigma",
            "0",
        ],
    );
    ok(d, &["solve", "--solver", "irls", "--lambda", "1e6"]);
    let report: ReportFile = load(d.join("report.json"));
    let fit = report.relative_fit_error.unwrap();
    assert!(fit < 1e-3, "{fit}");
}

#[test]
fn zero_data_converges_immediately() {
    for solver in ["ladmap", "irls", "weighted"] {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path();
        write(d, "X.csv", "0,0,0\n0,0,0\n");
        write(d, "D.csv", "1,0.5\n0,1\n");
        ok(d, &["solve", "--solver", solver]);
        let report: ReportFile = load(d.join("report.json"));
        assert!(report.converged, "{solver}");
        assert_eq!(report.final_objective, Some(0.0), "{solver}");
        if solver != "weighted" {
            assert_eq!(report.iterations, 1, "{solver}");
        }
        assert_eq!(
            fs::read_to_string(d.join("Z.csv")).unwrap(),
            "0,0,0\n0,0,0\n"
        );
    }
}

#[test]
fn bench_solvers_agree_on_default_instance() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["bench", "--seed", "5"]);
    let bench: BenchFile = load(dir.path().join("bench.json"));
    assert_eq!(bench.schema_version, 1);
    assert!(bench.ladmap.converged && bench.irls.converged);
    assert!(
        bench.relative_objective_gap < 1e-3,
        "{}",
        bench.relative_objective_gap
    );
}

#[test]
fn reports_have_consistent_traces() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--m", "15", "--k", "6", "--n", "25"]);
    for args in [
        vec!["solve", "--solver", "ladmap"],
        vec!["solve", "--solver", "irls"],
        vec!["solve", "--solver", "weighted", "--lambda", "10"],
        vec!["solve", "--solver", "sparse", "--beta", "0.5"],
    ] {
        ok(d, &args);
        let r: ReportFile = load(d.join("report.json"));
        assert_eq!(r.schema_version, 1);
        assert_eq!(r.solver, args[2]);
        assert_eq!(r.objective_trace.len(), r.iterations);
        assert_eq!(r.residual_trace.len(), r.iterations);
        assert!(r
            .objective_trace
            .iter()
            .chain(&r.residual_trace)
            .all(|v| v.is_finite()));
        assert_eq!(r.column_weights.is_some(), args[2] == "weighted");
        assert!(r.aborted.is_none());
    }
}

#[test]
fn generate_writes_truth_with_spec_echo() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "generate",
            "--seed",
            "9",
            "--m",
            "12",
            "--k",
            "4",
            "--n",
            "30",
            "--corruption-fraction",
            "0.2",
        ],
    );
    let truth: TruthFile = load(d.join("truth.json"));
    assert_eq!(truth.schema_version, 1);
    assert_eq!(truth.truth.corrupted_indices.len(), 6);
    assert_eq!(truth.truth.seed, 9);
    assert_eq!(truth.gen_spec.m, 12);
    assert!(truth.truth.orthogonal);
    assert_eq!(read_matrix_csv(d.join("X.csv")).unwrap().shape(), (12, 30));
    assert_eq!(read_matrix_csv(d.join("D.csv")).unwrap().shape(), (12, 4));
    assert_eq!(
        read_matrix_csv(d.join("Z_true.csv")).unwrap().shape(),
        (4, 30)
    );
}

#[test]
fn detect_strategies_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "Z.csv", "1,0,2,0.001\n1,0,2,0\n");
    ok(d, &["detect", "--strategy", "abs:0.5"]);
    let det: DetectionFile = load(d.join("detection.json"));
    assert_eq!(det.flagged, vec![1, 3]);
    assert_eq!(det.threshold, 0.5);
    assert_eq!(det.strategy, "abs:0.5");
    assert!(det.precision.is_none());

    let truth = serde_json::json!({
        "schema_version": 1,
        "corrupted_indices": [1],
        "corruption_magnitude": 10.0,
        "seed": 0,
        "orthogonal": true,
        "gen_spec": robrep_core::GenSpec { n: 4, ..Default::default() },
    });
    write(d, "truth.json", &truth.to_string());
    let truth_path = d.join("truth.json");
    ok(
        d,
        &[
            "detect",
            "--strategy",
            "median:0.1",
            "--truth",
            truth_path.to_str().unwrap(),
        ],
    );
    let det: DetectionFile = load(d.join("detection.json"));
    assert_eq!(det.flagged, vec![1, 3]);
    assert_eq!(det.precision, Some(0.5));
    assert_eq!(det.recall, Some(1.0));
}

#[test]
fn non_finite_solve_exits_2_with_partial_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "X.csv", "1e300,1e300\n1e300,1e300\n");
    write(d, "D.csv", "1e10,1e10\n1e10,-1e10\n");
    let out = robrep(d, &["solve"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "non_finite");
    let report: ReportFile = load(d.join("report.json"));
    let aborted = report.aborted.expect("aborted marker");
    assert_eq!(aborted.iteration, report.iterations + 1);
    assert!(!report.converged);
    assert!(d.join("Z.csv").exists() && d.join("E.csv").exists());
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    write(d, "X.csv", "1,2\n3\n");
    write(d, "D.csv", "1\n1\n");
    let out = robrep(d, &["solve"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["kind"], "csv_ragged_rows");
    assert_eq!(err["error"]["line"], 2);

    write(d, "X.csv", "1,2\n3,abc\n");
    let err = stderr_json(&robrep(d, &["solve"]));
    assert_eq!(err["error"]["kind"], "csv_parse");
    assert_eq!(
        (err["error"]["line"].as_u64(), err["error"]["col"].as_u64()),
        (Some(2), Some(2))
    );

    write(d, "X.csv", "1,2\n3,4\n");
    let err = stderr_json(&robrep(d, &["solve", "--solver", "sparse"]));
    assert_eq!(err["error"]["kind"], "config");
    let err = stderr_json(&robrep(d, &["solve", "--beta", "1"]));
    assert_eq!(err["error"]["kind"], "config");
    let err = stderr_json(&robrep(d, &["solve", "--rho", "0.9"]));
    assert_eq!(err["error"]["kind"], "invalid_parameter");

    let err = stderr_json(&robrep(d, &["solve", "--x", "missing.csv"]));
    assert_eq!(err["error"]["kind"], "io");

    let out = robrep(d, &["detect", "--strategy", "largest"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");
}

#[test]
fn shape_mismatch_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "X.csv", "1,2\n3,4\n");
    write(d, "D.csv", "1\n2\n3\n");
    let out = robrep(d, &["solve"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "shape_mismatch");
}

#[test]
fn repeated_runs_are_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        ok(
            dir,
            &[
                "generate", "--seed", "21", "--m", "20", "--k", "8", "--n", "30",
            ],
        );
        ok(dir, &["solve", "--solver", "sparse", "--beta", "0.3"]);
        ok(dir, &["detect"]);
    }
    for name in [
        "X.csv",
        "D.csv",
        "Z_true.csv",
        "Z.csv",
        "E.csv",
        "truth.json",
        "report.json",
        "detection.json",
    ] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn different_seeds_differ() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(
        a.path(),
        &[
            "generate", "--seed", "1", "--m", "5", "--k", "2", "--n", "5",
        ],
    );
    ok(
        b.path(),
        &[
            "generate", "--seed", "2", "--m", "5", "--k", "2", "--n", "5",
        ],
    );
    assert_ne!(
        fs::read(a.path().join("X.csv")).unwrap(),
        fs::read(b.path().join("X.csv")).unwrap()
    );
}
