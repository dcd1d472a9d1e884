use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foucault"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env("FOUCAULT_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let args = [
        "dos",
        "--seed",
        "7",
        "--set",
        "dos.n=40",
        "--set",
        "dos.n_samples=20000",
    ];
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(run(&a, &args).status.success());
    assert!(run(&b, &args).status.success());
    for name in ["dos.csv", "dos_summary.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let (ma, mb) = (manifest(&a), manifest(&b));
    assert_eq!(ma["input_hash"], mb["input_hash"]);
    assert_eq!(ma["outputs"], mb["outputs"]);
    assert_eq!(ma["derived_seeds"][0][1], 7);

    let c = tmp.path().join("c");
    let mut other = args;
    other[2] = "8";
    assert!(run(&c, &other).status.success());
    assert_ne!(fs::read(a.join("dos.csv")).unwrap(), fs::read(c.join("dos.csv")).unwrap());
}

#[test]
fn oversized_step_exits_2_and_names_the_rate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["simulate", "--set", "simulate.dt=5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("rate"), "{err}");
    assert!(err.contains("twisting"), "{err}");
}

#[test]
fn unknown_key_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["stationary", "--set", "pendulum.omgea=1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("omgea"));

    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[stationary]\nradius = 0.3\n").unwrap();
    let out = run(tmp.path(), &["stationary", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_physics_input_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["stationary", "--set", "pendulum.omega=-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn four_point_stationary_output_has_one_saddle() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["stationary", "--format", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("stationary.json")).unwrap()).unwrap();
    let points = v["set"]["points"].as_array().unwrap();
    assert_eq!(points.len(), 4);
    let saddles = points.iter().filter(|p| p["stability"] == "unstable-saddle").count();
    assert_eq!(saddles, 1);
    assert!(v["separatrix"]["h"].is_number());

    let csv = fs::read_to_string({
        let d = tmp.path().join("csv");
        assert!(run(&d, &["stationary"]).status.success());
        d.join("stationary.csv")
    })
    .unwrap();
    assert_eq!(csv.lines().skip(1).filter(|l| l.contains("unstable-saddle")).count(), 1);
}

#[test]
fn manifest_lists_every_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(
        tmp.path(),
        &[
            "sweep",
            "--set",
            "sweep.n=20",
            "--set",
            "sweep.steps=3",
            "--set",
            "sweep.n_samples=5000",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(tmp.path());
    let listed: Vec<String> = m["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["file"].as_str().unwrap().to_string())
        .collect();
    let mut on_disk: Vec<String> = fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n != "manifest.json")
        .collect();
    on_disk.sort();
    let mut sorted = listed.clone();
    sorted.sort();
    assert_eq!(sorted, on_disk);
    assert_eq!(listed.len(), 4);
    assert_eq!(m["derived_seeds"].as_array().unwrap().len(), 3);
    assert_eq!(m["command"], "sweep");
    assert_eq!(m["threads"], 2);
}

#[test]
fn validate_exits_3_on_failure_and_0_on_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let small = [
        "validate",
        "--set",
        "validate.s0=[0.01]",
        "--set",
        "validate.delta_omega=[0.0]",
        "--set",
        "validate.omega_rot=[0.0]",
        "--set",
        "validate.periods=5",
    ];
    assert_eq!(run(&tmp.path().join("ok"), &small).status.code(), Some(0));
    let mut strict = small.to_vec();
    strict.extend(["--set", "validate.tolerance=1e-12"]);
    let out = run(&tmp.path().join("fail"), &strict);
    assert_eq!(out.status.code(), Some(3));
    assert!(tmp.path().join("fail/validate.csv").exists());
}
