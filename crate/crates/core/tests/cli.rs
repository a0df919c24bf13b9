use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rapidbranch"));
    c.env_remove("RB_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn generate(dir: &Path, name: &str, family: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["generate"];
    args.extend_from_slice(family);
    args.extend_from_slice(&["-o", &p]);
    let out = run(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p
}

#[test]
fn pipeline_on_generated_antitree() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "at.txt", &["--family", "antitree", "--sigma", "3", "--depth", "4"]);

    let out = run(&["spectrum", "--graph", &g, "--count", "5"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "k,lambda_k,d_k,ratio");
    assert_eq!(rows.len(), 6);

    let out = run(&["iso", "--graph", &g, "--max-size", "5", "--core-only"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["report"]["alpha_bruteforce"].as_f64().unwrap() > 0.0);
    assert_eq!(v["report"]["minimizing_set"], serde_json::json!([0, 1, 2, 3]));

    let plot = dir.path().join("growth.gp");
    let data = dir.path().join("growth.csv");
    let out = run(&["growth", "--graph", &g, "--nmax", "3", "-o", data.to_str().unwrap(), "--gnuplot-script", plot.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&plot).unwrap().contains("plot"));
    let csv = std::fs::read_to_string(&data).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("3,40,3513,")));

    let out = run(&["incomplete", "--graph", &g, "--s", "0.36"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["worst_defect"].as_f64().unwrap() <= 1e-9);

    let out = run(&["heat", "--graph", &g, "--t", "0.5", "--steps", "8", "--out", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["mass"].as_array().unwrap().len(), 9);
}

#[test]
fn json_and_expanded_graphs_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "k.json", &["--family", "complete", "--n", "6", "--format", "json"]);
    let b = generate(dir.path(), "k.txt", &["--family", "complete", "--n", "6", "--expand"]);
    let spectra: Vec<Vec<u8>> = [a, b]
        .iter()
        .map(|g| {
            let out = run(&["spectrum", "--graph", g, "--bc", "neumann"]);
            assert!(out.status.success());
            out.stdout
        })
        .collect();
    let body = |s: &[u8]| String::from_utf8_lossy(s).lines().filter(|l| !l.starts_with("# solver")).map(String::from).collect::<Vec<_>>();
    let (x, y) = (body(&spectra[0]), body(&spectra[1]));
    let last = |v: &[String]| v.last().unwrap().split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert!((last(&x) - 6.0).abs() < 1e-9 && (last(&y) - 6.0).abs() < 1e-9);
}

#[test]
fn verify_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let reports: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let path = dir.path().join(format!("r{i}.json"));
            let out = run(&["verify", "--family", "antitree", "--sigma", "3", "--depth", "4", "--seed", "7", "-o", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
            std::fs::read(path).unwrap()
        })
        .collect();
    assert_eq!(reports[0], reports[1]);
    let from_env = bin().args(["verify", "--family", "antitree", "--sigma", "3", "--depth", "4"]).env("RB_SEED", "7").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&from_env.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 7);
    assert_eq!(serde_json::to_vec_pretty(&v).unwrap().len() > 0, true);
    let from_file: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v, from_file);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify", "--family", "block", "--s", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum"]).status.code(), Some(2));
    assert_eq!(run(&["spectrum", "--graph", "/nonexistent/graph.txt"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn certificate_failure_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let g = generate(dir.path(), "b.txt", &["--family", "block", "--s", "0.5", "--depth", "2"]);
    let out = run(&["incomplete", "--graph", &g, "--s", "0.3"]);
    assert_ne!(out.status.code(), Some(0));
}
