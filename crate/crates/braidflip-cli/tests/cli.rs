//! End-to-end tests of the `braidflip` binary: report content, determinism,
//! file round-trips, and the exit-code contract.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_braidflip")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary launches")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

static COUNTER: AtomicUsize = AtomicUsize::new(0);

/// A collision-free scratch path (the tests run in one process but in
/// parallel threads).
fn temp_path(tag: &str) -> PathBuf {
    let k = COUNTER.fetch_add(1, Ordering::Relaxed);
    std::env::temp_dir().join(format!("braidflip-cli-test-{}-{k}-{tag}", std::process::id()))
}

fn read_json(path: &PathBuf) -> serde_json::Value {
    let text = std::fs::read_to_string(path).expect("report file exists");
    serde_json::from_str(&text).expect("report parses as JSON")
}

const STATIC_TRIANGLE: &str = r#"{
  "name": "static-triangle",
  "strands": [
    [{"kind": "linear", "t": [0.0, 1.0], "from": [0.0, 0.0], "to": [0.0, 0.0]}],
    [{"kind": "linear", "t": [0.0, 1.0], "from": [1.0, 0.0], "to": [1.0, 0.0]}],
    [{"kind": "linear", "t": [0.0, 1.0], "from": [0.0, 1.0], "to": [0.0, 1.0]}]
  ]
}"#;

/// Four permanently cocircular points: degenerate at every probe time.
const COCIRCULAR_SQUARE: &str = r#"{
  "name": "cocircular-square",
  "strands": [
    [{"kind": "linear", "t": [0.0, 1.0], "from": [1.0, 0.0], "to": [1.0, 0.0]}],
    [{"kind": "linear", "t": [0.0, 1.0], "from": [0.0, 1.0], "to": [0.0, 1.0]}],
    [{"kind": "linear", "t": [0.0, 1.0], "from": [-1.0, 0.0], "to": [-1.0, 0.0]}],
    [{"kind": "linear", "t": [0.0, 1.0], "from": [0.0, -1.0], "to": [0.0, -1.0]}]
  ]
}"#;

#[test]
fn paper_invariant_report_matches_the_fixture() {
    let json = temp_path("paper.json");
    let out = run(&[
        "invariant",
        "--example",
        "paper",
        "--r",
        "4",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let report = read_json(&json);

    assert_eq!(report["events"].as_array().unwrap().len(), 6);
    assert_eq!(report["coloring"]["dimension"], 160);
    let dims = report["coloring"]["per_triangulation"].as_array().unwrap();
    assert_eq!(dims.len(), 7);
    assert!(dims.iter().all(|d| d == 160));
    assert_eq!(report["spectrum"]["multiplicity_at_minus_one"], 20);
    assert_eq!(report["spectrum"]["multiplicity_at_plus_one"], 140);
    assert_eq!(report["spectrum"]["clusters"].as_array().unwrap().len(), 2);
    assert!(report["operator"]["max_deviation_from_identity"].as_f64().unwrap() > 1e-3);
    assert!(report["operator"].get("matrix_row_major").is_none(), "dump must be off by default");
    assert_eq!(report["identity_suites"]["orthogonality"]["pass"], true);
    assert_eq!(report["identity_suites"]["pentagon"]["pass"], true);
    assert_eq!(report["parameters"]["r"], 4);
    assert_eq!(report["input"]["strand_count"], 5);
    std::fs::remove_file(&json).ok();
}

#[test]
fn reports_are_deterministic() {
    let json_a = temp_path("det-a.json");
    let json_b = temp_path("det-b.json");
    let args = |path: &str| {
        vec![
            "invariant".to_string(),
            "--example".to_string(),
            "paper".to_string(),
            "--json".to_string(),
            path.to_string(),
        ]
    };
    let out_a = Command::new(bin()).args(args(json_a.to_str().unwrap())).output().unwrap();
    let out_b = Command::new(bin()).args(args(json_b.to_str().unwrap())).output().unwrap();
    assert!(out_a.status.success() && out_b.status.success());
    let bytes_a = std::fs::read(&json_a).unwrap();
    let bytes_b = std::fs::read(&json_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "reports must be byte-identical across runs");
    // Stdout differs only in the report path it mentions; strip those lines.
    let trim = |out: &Output| {
        stdout_of(out)
            .lines()
            .filter(|l| !l.starts_with("report written"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(trim(&out_a), trim(&out_b));
    std::fs::remove_file(&json_a).ok();
    std::fs::remove_file(&json_b).ok();
}

#[test]
fn matrix_dump_carries_the_operator_and_basis() {
    let json = temp_path("dump.json");
    let out = run(&[
        "invariant",
        "--example",
        "paper",
        "--dump-matrix",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let report = read_json(&json);
    assert_eq!(
        report["operator"]["matrix_row_major"].as_array().unwrap().len(),
        160 * 160
    );
    let rows = report["operator"]["basis_rows"].as_array().unwrap();
    assert_eq!(rows.len(), 160);
    assert!(rows.iter().all(|row| row.as_array().unwrap().len() == 9));
    assert_eq!(report["operator"]["basis_edge_order"].as_array().unwrap().len(), 9);
    std::fs::remove_file(&json).ok();
}

#[test]
fn static_braid_gives_identity_and_no_events() {
    let braid = temp_path("static.json");
    std::fs::write(&braid, STATIC_TRIANGLE).unwrap();
    let json = temp_path("static-report.json");
    let out = run(&[
        "invariant",
        "--file",
        braid.to_str().unwrap(),
        "--r",
        "5",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let report = read_json(&json);
    assert!(report["events"].as_array().unwrap().is_empty());
    assert_eq!(report["operator"]["max_deviation_from_identity"], 0.0);
    assert_eq!(report["operator"]["dim"], report["coloring"]["dimension"]);
    assert_eq!(report["input"]["name"], "static-triangle");
    std::fs::remove_file(&braid).ok();
    std::fs::remove_file(&json).ok();
}

#[test]
fn ptolemy_report_matches_the_frozen_transport() {
    let json = temp_path("ptolemy.json");
    let out = run(&[
        "invariant",
        "--example",
        "paper",
        "--tuple",
        "ptolemy",
        "--seed-lengths",
        "euclidean",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let report = read_json(&json);
    let finals = report["ptolemy"]["final"].as_array().unwrap();
    let lookup = |u: u64, v: u64| -> f64 {
        finals
            .iter()
            .find(|e| e["edge"][0] == u && e["edge"][1] == v)
            .unwrap_or_else(|| panic!("edge ({u},{v}) missing"))["length"]
            .as_f64()
            .unwrap()
    };
    assert!((lookup(0, 2) - 2.732_050_807_568_877_2).abs() < 1e-9);
    assert!((lookup(0, 3) - 4.524_870_024_737_243_3).abs() < 1e-9);
    assert!((lookup(1, 2) - 6.942_532_693_276_552_5).abs() < 1e-9);
    assert!((lookup(2, 4) - 3.0f64.sqrt()).abs() < 1e-9);
    assert!(report["ptolemy"]["roundtrip_residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(report["ptolemy"]["pass"], true);
    std::fs::remove_file(&json).ok();
}

#[test]
fn describe_round_trips_through_a_file() {
    let braid = temp_path("described.json");
    let out = run(&["describe", "--example", "paper", "--out", braid.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));

    let from_file = temp_path("events-file.json");
    let from_example = temp_path("events-example.json");
    let out_file = run(&[
        "events",
        "--file",
        braid.to_str().unwrap(),
        "--json",
        from_file.to_str().unwrap(),
    ]);
    let out_example = run(&[
        "events",
        "--example",
        "paper",
        "--json",
        from_example.to_str().unwrap(),
    ]);
    assert!(out_file.status.success() && out_example.status.success());
    let report_file = read_json(&from_file);
    let report_example = read_json(&from_example);
    assert_eq!(report_file["events"], report_example["events"]);
    assert_eq!(report_file["events"].as_array().unwrap().len(), 6);
    for path in [braid, from_file, from_example] {
        std::fs::remove_file(&path).ok();
    }
}

#[test]
fn events_refinement_is_reported_stable() {
    let out = run(&["events", "--example", "paper", "--samples", "512", "--refine", "1"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("refine to 1024 samples"), "stdout: {text}");
    assert!(text.contains("stable"), "stdout: {text}");
}

#[test]
fn verify_passes_for_small_levels() {
    let out = run(&["verify", "--r-min", "3", "--r-max", "4"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("verdict: all identities hold"), "stdout: {text}");
}

#[test]
fn malformed_input_exits_2_with_a_located_error() {
    let braid = temp_path("broken.json");
    std::fs::write(&braid, "{\n  \"name\": \"x\",\n  \"strands\": [[{\"kind\": 7}]]\n}").unwrap();
    let out = run(&["invariant", "--file", braid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("line"), "stderr: {}", stderr_of(&out));
    std::fs::remove_file(&braid).ok();
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["invariant", "--file", "/nonexistent/braid.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_example_exits_2() {
    let out = run(&["invariant", "--example", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn degenerate_configuration_exits_3_with_a_hint() {
    let braid = temp_path("cocircular.json");
    std::fs::write(&braid, COCIRCULAR_SQUARE).unwrap();
    let out = run(&["events", "--file", braid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    let err = stderr_of(&out);
    assert!(err.contains("hint:"), "stderr: {err}");
    assert!(err.contains("perturb"), "stderr: {err}");
    std::fs::remove_file(&braid).ok();
}

#[test]
fn perturbed_verify_exits_4_with_a_counterexample() {
    let out = run(&["verify", "--r-min", "4", "--r-max", "4", "--perturb", "1e-3"]);
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_of(&out));
    let err = stderr_of(&out);
    assert!(err.contains("identity violations"), "stderr: {err}");
    assert!(err.contains("deviation"), "stderr: {err}");
}
