use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use edcs_core::graph::io::read_edge_list;
use edcs_core::instances::InstanceMeta;
use edcs_lab::SummaryReport;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edcs-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    lab(args).status.code().expect("exit code")
}

fn read_report(path: &Path) -> SummaryReport {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_writes_edge_list_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], usize); 3] = [
        (&["--family", "three-layer", "--m", "40"], 240),
        (&["--family", "four-layer", "--m", "3"], 24),
        (&["--family", "gnp", "--n", "1000", "--density", "0.01", "--instance-seed", "4"], 1000),
    ];
    for (i, (flags, n)) in cases.iter().enumerate() {
        let out = dir.path().join(format!("g{i}.txt"));
        let mut args = vec!["gen", "--out", out.to_str().unwrap()];
        args.extend_from_slice(flags);
        assert_eq!(code(&args), 0);
        let g = read_edge_list(fs::read(&out).unwrap().as_slice()).unwrap();
        assert_eq!(g.num_vertices(), *n);
        let sidecar = fs::read_to_string(dir.path().join(format!("g{i}.txt.json"))).unwrap();
        let _: InstanceMeta = serde_json::from_str(&sidecar).unwrap();
    }
    // the random instance is a function of its seed
    let again = dir.path().join("again.txt");
    let args = ["gen", "--out", again.to_str().unwrap(), "--family", "gnp", "--n", "1000", "--density", "0.01"];
    assert_eq!(code(&[&args[..], &["--instance-seed", "4"]].concat()), 0);
    assert_eq!(fs::read(&again).unwrap(), fs::read(dir.path().join("g2.txt")).unwrap());
}

#[test]
fn run_writes_a_self_consistent_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let args = [
        "run", "--family", "three-layer", "--m", "10", "--trials", "6", "--seed", "3", "--no-fallback", "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let r = read_report(&out);
    assert_eq!(r.trials.len(), 6);
    assert_eq!(r.recompute(), r);
    let first = fs::read(&out).unwrap();
    assert_eq!(code(&args), 0);
    assert_eq!(fs::read(&out).unwrap(), first);
}

#[test]
fn config_file_round_trip_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(
        &cfg,
        r#"{"instance": {"kind": "three-layer", "m": 8}, "trials": 4, "protocol": {"k": 3, "beta": 6}}"#,
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let args = ["run", "--config", cfg.to_str().unwrap(), "--trials", "2", "--out", out.to_str().unwrap()];
    assert_eq!(code(&args), 0);
    let r = read_report(&out);
    assert_eq!(r.trials.len(), 2);
    assert_eq!(r.config.protocol.k, 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let out = out.to_str().unwrap();
    // an unattainable ratio floor is an assertion failure, and the report is still written
    assert_eq!(code(&["run", "--family", "three-layer", "--m", "5", "--min-ratio", "1.5", "--out", out]), 1);
    assert!(!read_report(Path::new(out)).passed());
    // usage errors
    assert_eq!(code(&["run"]), 2);
    assert_eq!(code(&["run", "--family", "three-layer", "--m", "5", "--trials", "0"]), 2);
    assert_eq!(code(&["run", "--family", "three-layer", "--m", "5", "--beta", "3"]), 2);
    assert_eq!(code(&["sweep", "--no-fallback"]), 2);
    assert_eq!(code(&["verify", "--family", "three-layer", "--m", "5"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    // malformed config is a usage error, a missing one an IO error
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&["run", "--config", bad.to_str().unwrap()]), 2);
    assert_eq!(code(&["run", "--config", "/nonexistent/cfg.json"]), 3);
    assert_eq!(code(&["run", "--instance-file", "/nonexistent/g.txt"]), 3);
    assert_eq!(code(&["gen", "--family", "three-layer", "--m", "2", "--out", "/nonexistent/dir/g.txt"]), 3);
}

#[test]
fn verify_and_sweep_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("v.json");
    let args = [
        "verify", "--family", "four-layer", "--m", "3", "--beta", "4", "--suite", "augment-bound", "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let r = read_report(&out);
    assert_eq!(r.checks[0].detail["max_value"], 9.0);

    let out = dir.path().join("s.json");
    let args = [
        "sweep", "--ns", "128,256,512", "--avg-degree", "16", "--trials", "2", "--no-fallback", "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(code(&args), 0);
    let r = read_report(&out);
    assert_eq!(r.sweep.as_ref().unwrap().points.len(), 3);
    assert_eq!(r.recompute(), r);
}

#[test]
fn instance_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    assert_eq!(code(&["gen", "--family", "three-layer", "--m", "6", "--out", g.to_str().unwrap()]), 0);
    let out = lab(&["run", "--instance-file", g.to_str().unwrap(), "--trials", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r: SummaryReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r.num_vertices, 36);
}
