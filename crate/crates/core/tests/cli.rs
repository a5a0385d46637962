use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn holocode(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holocode"))
        .current_dir(dir)
        .env_remove("HOLOCODE_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn build_verify_and_decode_a_saved_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = holocode(d, &["build", "--family", "heptagon", "--radius", "2", "--out", "h2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("n=42 k=8"));
    assert!(d.join("h2.tableau").exists() && d.join("h2.json").exists());

    let manifest = json(&d.join("manifest.json"));
    assert_eq!(manifest["command"], "build");
    assert_eq!(manifest["args"]["radius"], 2);

    assert_eq!(code(&holocode(d, &["verify", "code", "--code", "h2"])), 0);

    let zeros = "0".repeat(34);
    let out = holocode(d, &["decode", "--code", "h2", "--syndrome", &zeros, "--json"]);
    assert_eq!(code(&out), 0);
    let decoded: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(decoded["weight"], 0);
    assert_eq!(decoded["certified"], true);

    let one = format!("{}1", "0".repeat(33));
    let out = holocode(d, &["decode", "--code", "h2", "--syndrome", &one, "--json"]);
    let decoded: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(decoded["weight"], 1);
    assert_eq!(decoded["correction"].as_str().unwrap().len(), 42);
}

#[test]
fn bad_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&holocode(d, &["simulate", "--family", "octagon", "--radius", "1"])), 4);
    assert_eq!(code(&holocode(d, &["build", "--family", "heptagon"])), 4);
    assert_eq!(code(&holocode(d, &["frobnicate"])), 4);
    assert_eq!(code(&holocode(d, &["--help"])), 0);

    holocode(d, &["build", "--family", "pentagon", "--variant", "zero", "--radius", "1", "--out", "p1"]);
    assert_eq!(code(&holocode(d, &["decode", "--code", "p1", "--syndrome", "101"])), 4);
    assert_eq!(code(&holocode(d, &["decode", "--code", "missing", "--syndrome", "0"])), 4);
}

#[test]
fn a_broken_tableau_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    holocode(d, &["build", "--family", "heptagon", "--radius", "2", "--out", "h2"]);
    let text = fs::read_to_string(d.join("h2.tableau")).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[1].replace_range(0..1, "Z");
    fs::write(d.join("h2.tableau"), lines.join("\n") + "\n").unwrap();
    assert_eq!(code(&holocode(d, &["verify", "code", "--code", "h2"])), 2);
}

#[test]
fn verify_all_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = holocode(dir.path(), &["verify", "all"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains(", 0 failed"));
}

#[test]
fn distance_rows_are_certified() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = holocode(d, &["distance", "--family", "heptagon", "--radius", "2", "--out", "d.json"]);
    assert_eq!(code(&out), 0);
    let rows = json(&d.join("d.json"));
    assert_eq!(rows[0]["d_bit"], 9);
    assert_eq!(rows[0]["d_word"], 6);
    assert_eq!(rows[0]["certified"], true);
}

#[test]
fn an_exhausted_budget_reports_bounds_with_solver_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = holocode(
        dir.path(),
        &["distance", "--family", "heptagon", "--radius", "3", "--backend", "branch-and-bound", "--timeout", "0.01"],
    );
    assert_eq!(code(&out), 3);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["certified"], false);
    assert!(rows[0]["d_bit"].as_u64().unwrap() >= 19);
}

#[test]
fn simulate_threshold_and_plotdata_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for r in ["1", "2"] {
        let out_name = format!("r{r}.csv");
        let out = holocode(
            d,
            &["simulate", "--family", "heptagon", "--radius", r, "--trials-per-weight", "200", "--out", &out_name],
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let header = fs::read_to_string(d.join("r1.csv")).unwrap();
    assert!(header.starts_with("family,variant,R,n,k,target,a,m,f,P,sigma,timeouts"));

    let out = holocode(d, &["threshold", "r1.csv", "r2.csv", "--out", "th.json"]);
    assert_eq!(code(&out), 0);
    let th = json(&d.join("th.json"));
    let p = th["p_th"].as_f64().unwrap();
    assert!(p > 0.0 && p < 0.5);
    assert_eq!(th["pairs"].as_array().unwrap().len(), 1);

    let out = holocode(d, &["plotdata", "r1.csv", "r2.csv", "--points", "11", "--out", "plot.csv"]);
    assert_eq!(code(&out), 0);
    let plot = fs::read_to_string(d.join("plot.csv")).unwrap();
    assert!(plot.lines().next().unwrap().contains("p_failure"));
    assert_eq!(plot.lines().count(), 1 + 2 * 11);

    assert_eq!(code(&holocode(d, &["threshold", "r1.csv"])), 4);
}

#[test]
fn a_manifest_replays_to_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = ["simulate", "--family", "pentagon", "--variant", "reduced", "--radius", "2"];
    let first = holocode(d, &[&args[..], &["--trials-per-weight", "100", "--seed", "5", "--out", "a.csv"]].concat());
    assert_eq!(code(&first), 0);
    let manifest = json(&d.join("manifest.json"));
    assert_eq!(manifest["args"]["seed"], 5);

    fs::rename(d.join("manifest.json"), d.join("run.json")).unwrap();
    let replay = holocode(d, &["simulate", "--config", "run.json", "--out", "b.csv", "--manifest", "m2.json"]);
    assert_eq!(code(&replay), 0, "{}", String::from_utf8_lossy(&replay.stderr));
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
}

#[test]
fn thread_count_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = Command::new(env!("CARGO_BIN_EXE_holocode"))
        .current_dir(d)
        .env("HOLOCODE_THREADS", "3")
        .args(["build", "--family", "pentagon", "--variant", "zero", "--radius", "1", "--out", "p1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json(&d.join("manifest.json"))["threads"], 3);
}
