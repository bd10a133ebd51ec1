use std::path::Path;
use std::process::{Command, Output};

use ccsynth_core::circuit::matrix_to_json;
use ccsynth_core::{gates, kak, linalg};
use serde_json::Value;

fn ccsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ccsynth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &[u8]) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn lower_bound_command() {
    let out = ccsynth(&["lower-bound", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "6");
    assert_eq!(String::from_utf8_lossy(&ccsynth(&["lower-bound", "2"]).stdout).trim(), "1");
    assert_eq!(code(&ccsynth(&["lower-bound", "1"])), 2);
    assert_eq!(code(&ccsynth(&["lower-bound", "x"])), 2);
}

#[test]
fn synth_outputs_verify_against_their_targets() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], usize); 5] = [
        (&["fredkin"], 5),
        (&["toffoli"], 5),
        (&["ccu", "--u", "X"], 5),
        (&["ccu", "--diag", "-0.785398", "0.785398"], 4),
        (&["ccu", "--u", "H"], 5),
    ];
    for (i, (spec, count)) in cases.iter().enumerate() {
        let mut args = vec!["synth"];
        args.extend_from_slice(spec);
        let out = ccsynth(&args);
        assert_eq!(code(&out), 0, "{spec:?}");
        assert_eq!(json(&out)["gates"].as_array().unwrap().len(), *count, "{spec:?}");
        let file = write(dir.path(), &format!("c{i}.json"), &out.stdout);
        let mut args = vec!["verify", file.as_str()];
        args.extend_from_slice(spec);
        let out = ccsynth(&args);
        assert_eq!(code(&out), 0, "{spec:?}");
        assert_eq!(json(&out)["pass"], Value::Bool(true));
    }
}

#[test]
fn synth_is_stable_across_runs() {
    let a = ccsynth(&["synth", "ccu", "--u", "0.6,0,0.8,0,-0.8,0,0.6,0"]);
    let b = ccsynth(&["synth", "ccu", "--u", "0.6,0,0.8,0,-0.8,0,0.6,0"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn synth_listing() {
    let out = ccsynth(&["synth", "fredkin", "--listing"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("u4 ")).count(), 5);
}

#[test]
fn synth_rejects_bad_u() {
    assert_eq!(code(&ccsynth(&["synth", "ccu", "--u", "[[[1,0],[0,0]],[[0,0],[2,0]]]"])), 3);
    assert_eq!(code(&ccsynth(&["synth", "ccu", "--u", "1,2,3"])), 3);
    assert_eq!(code(&ccsynth(&["synth", "ccu"])), 2);
    assert_eq!(code(&ccsynth(&["synth", "nonsense"])), 2);
}

#[test]
fn classify_command() {
    let out = ccsynth(&["classify", "--u", "X"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["count"], 5);
    let out = ccsynth(&["classify", "--diag", "-0.39269908169872414", "0.39269908169872414"]);
    assert_eq!(json(&out)["count"], 4);
    assert_eq!(json(&ccsynth(&["classify", "--u", "I"]))["count"], 0);
    assert_eq!(code(&ccsynth(&["classify", "--u", "[[[1,0],[1,0]],[[0,0],[1,0]]]"])), 3);
}

#[test]
fn verify_mismatch_and_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = ccsynth(&["synth", "fredkin"]);
    let file = write(dir.path(), "f.json", &out.stdout);
    let out = ccsynth(&["verify", &file, "toffoli"]);
    assert_eq!(code(&out), 1);
    // Oracle: distance computed directly from the library.
    let circuit = ccsynth_core::Circuit::from_json(&std::fs::read_to_string(&file).unwrap()).unwrap();
    let want = linalg::phase_distance(&circuit.unitary(), &gates::toffoli()).unwrap();
    let got = json(&out)["phase_distance"].as_f64().unwrap();
    assert!((got - want).abs() < 1e-12);

    let truncated = write(dir.path(), "t.json", &std::fs::read(&file).unwrap()[..60]);
    assert_eq!(code(&ccsynth(&["verify", &truncated, "fredkin"])), 3);
    assert_eq!(code(&ccsynth(&["verify", "/nonexistent/file.json", "fredkin"])), 3);

    // Target given as an 8x8 matrix file.
    let target = write(
        dir.path(),
        "target.json",
        serde_json::to_string(&matrix_to_json(&gates::fredkin())).unwrap().as_bytes(),
    );
    assert_eq!(code(&ccsynth(&["verify", &file, &target])), 0);
}

#[test]
fn kak_command() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "cnot.json",
        serde_json::to_string(&matrix_to_json(&gates::cnot())).unwrap().as_bytes(),
    );
    let out = ccsynth(&["kak", &file]);
    assert_eq!(code(&out), 0);
    let alpha: Vec<f64> = json(&out)["alpha"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let want = kak::kak_decompose(&gates::cnot()).unwrap().alpha;
    assert!((alpha[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-8);
    assert!(alpha.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12));

    let bad = write(dir.path(), "bad.json", b"[[[1,0],[0,0]],[[0,0],[1,0]]]");
    assert_eq!(code(&ccsynth(&["kak", &bad])), 3);
}

#[test]
fn evidence_guard_and_small_run() {
    assert_eq!(code(&ccsynth(&["evidence", "fredkin", "--kmax", "9"])), 2);
    assert_eq!(code(&ccsynth(&["evidence", "fredkin", "--kmax", "2", "--restarts", "0"])), 2);

    let args = ["evidence", "fredkin", "--kmax", "3", "--seed", "7", "--restarts", "3"];
    let a = ccsynth(&args);
    assert_eq!(code(&a), 0);
    let report = json(&a);
    let floors: Vec<f64> = report["floors"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(floors.len(), 3);
    assert!(floors.iter().all(|&f| f > 1e-3));
    assert!(report["verdict"].as_str().unwrap().contains("empirical"));
    assert_eq!(report["structures"].as_array().unwrap().len(), 3 + 6 + 12);
    // Deterministic for a fixed seed.
    assert_eq!(a.stdout, ccsynth(&args).stdout);
}

#[test]
fn evidence_reaches_the_construction_for_ccu() {
    let out = ccsynth(&["evidence", "ccu", "--diag", "0", "3.14159", "--kmax", "5", "--restarts", "1", "--max-iter", "100"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert!(report["floors"][4].as_f64().unwrap() < 1e-6);
    assert_eq!(report["fitted_at"], 5);
}
