use std::fs;
use std::path::Path;
use std::process::Command;

use curveflow::cli::{run_cli, EXIT_INVALID, EXIT_OK};
use curveflow::io::{parse_snapshot, SUMMARY_HEADER};
use curveflow::{enclosed_area, load_polyline, parse_config};
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curveflow"))
}

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let out = dir.join("out");
    let path = dir.join("run.conf");
    fs::write(&path, format!("{body}out_dir = {}\n", out.display())).unwrap();
    path
}

const EXAMPLE_2: &str = "\
folds = 5
amplitude = 0.65
model = area_preserving
nodes = 200
tau = 1e-4
t_final = 0.01
snapshot_every = 25
";

fn summary_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn run_writes_snapshots_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), EXAMPLE_2);
    assert_eq!(run_cli(["curveflow", "run", config.to_str().unwrap()]), EXIT_OK);

    let out = dir.path().join("out");
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().next(), Some(SUMMARY_HEADER));
    let rows = summary_rows(&summary);
    // t = 0, 0.0025, 0.005, 0.0075, 0.01
    assert_eq!(rows.len(), 5);

    for (k, row) in rows.iter().enumerate() {
        let text = fs::read_to_string(out.join(format!("snapshot_{k:05}.dat"))).unwrap();
        let snap = parse_snapshot(&text).unwrap();
        assert_eq!(snap.nodes.len(), 200);
        assert_eq!(snap.t, row[0]);

        let xy: String = snap.nodes.iter().map(|p| format!("{:e} {:e}\n", p.x, p.y)).collect();
        let curve = load_polyline(&xy).unwrap();
        assert_eq!(curve.nodes(), &snap.nodes[..]);
        assert_eq!(enclosed_area(&curve), row[2]);
    }

    let first = parse_snapshot(&fs::read_to_string(out.join("snapshot_00000.dat")).unwrap()).unwrap();
    let a0 = enclosed_area(&load_polyline(&first.nodes.iter().map(|p| format!("{} {}\n", p.x, p.y)).collect::<String>()).unwrap());
    assert!((a0 - 3.805).abs() / 3.805 < 0.01, "initial area {a0}");
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), EXAMPLE_2);
    let summary = dir.path().join("out/summary.csv");
    let status = bin().arg("run").arg(&config).output().unwrap();
    assert!(status.status.success());
    let first = fs::read(&summary).unwrap();
    let status = bin().arg("run").arg(&config).output().unwrap();
    assert!(status.status.success());
    assert_eq!(first, fs::read(&summary).unwrap());
}

#[test]
fn invalid_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.conf");
    assert_eq!(bin().arg("run").arg(&missing).status().unwrap().code(), Some(EXIT_INVALID));

    for body in ["model = csf\n", "folds = 5\namplitude = 1.5\nmodel = csf\nt_final = 1\n", "speed = 2\n"] {
        let path = dir.path().join("bad.conf");
        fs::write(&path, body).unwrap();
        assert_eq!(run_cli(["curveflow", "run", path.to_str().unwrap()]), EXIT_INVALID, "{body:?}");
    }
    assert_eq!(run_cli(["curveflow", "frobnicate"]), EXIT_INVALID);
    assert_eq!(run_cli(["curveflow", "convergence", "--levels", "2"]), EXIT_INVALID);
    assert!(!dir.path().join("out").exists());
}

#[test]
fn polyline_config_resolves_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let shape = dir.path().join("shape.txt");
    fs::write(&shape, curveflow::analysis::PI_SHAPE_POLYLINE).unwrap();
    let body = format!("polyline_path = {}\nmodel = area_preserving\nt_final = 0.001\n", shape.display());
    let config = write_config(dir.path(), &body);
    assert_eq!(run_cli(["curveflow", "run", config.to_str().unwrap()]), EXIT_OK);
    assert!(dir.path().join("out/snapshot_00001.dat").exists());
}

#[test]
fn oracle_and_examples_subcommands_succeed() {
    let out = bin().args(["oracle", "--tau", "1e-4", "--nodes", "100"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("extinction time"));

    let dir = tempfile::tempdir().unwrap();
    let out = bin().arg("examples").arg("--out-dir").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let csv = fs::read_to_string(dir.path().join("study.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(bin().arg("--help").output().unwrap().status.code(), Some(EXIT_OK));
}

proptest! {
    #[test]
    fn config_parser_never_panics(lines in prop::collection::vec("[a-z_ =#.0-9-]{0,24}", 0..12)) {
        let _ = parse_config(&lines.join("\n"));
    }

    #[test]
    fn config_parser_handles_mutated_keys(
        key in prop::sample::select(curveflow::config::KEYS.to_vec()),
        value in "[ -~]{0,16}",
    ) {
        let text = format!("{EXAMPLE_2}{key} = {value}\n");
        let _ = parse_config(&text);
    }
}
