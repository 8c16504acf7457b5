use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qaoa-landscape"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = cli(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn gen_writes_the_requested_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    ok(&[
        "gen",
        "--family",
        "uniform",
        "--n",
        "8",
        "--t-size",
        "128",
        "--count",
        "500",
        "--seed",
        "1",
        "--out",
        p(&e),
    ]);
    let v: Value = serde_json::from_str(&fs::read_to_string(&e).unwrap()).unwrap();
    assert_eq!(v["family"], "uniform");
    assert_eq!(v["instances"].as_array().unwrap().len(), 500);
    assert_eq!(v["instances"][3]["targets"].as_array().unwrap().len(), 128);
}

#[test]
fn landscape_writes_grid_and_cross_section() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    ok(&[
        "analytic-uniform",
        "--n",
        "8",
        "--t-size",
        "128",
        "--out",
        p(&s),
    ]);
    let summary: Value = serde_json::from_str(&fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(summary["mode"], "paper");
    let g = dir.path().join("g.csv");
    ok(&[
        "landscape",
        "--summary",
        p(&s),
        "--grid",
        "100x100",
        "--cross-section",
        "1.2",
        "--out",
        p(&g),
    ]);
    let grid = fs::read_to_string(&g).unwrap();
    assert_eq!(grid.lines().count(), 100 * 100 + 1);
    assert_eq!(grid.lines().next(), Some("beta,gamma,value"));
    let cross = fs::read_to_string(dir.path().join("g_cross.csv")).unwrap();
    assert_eq!(cross.lines().count(), 101);
}

#[test]
fn ensemble_landscape_writes_companions() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    ok(&[
        "gen",
        "--family",
        "clustered",
        "--n",
        "8",
        "--count",
        "10",
        "--seed",
        "4",
        "--out",
        p(&e),
    ]);
    let g = dir.path().join("mean.csv");
    ok(&[
        "landscape",
        "--ensemble",
        p(&e),
        "--grid",
        "10x12",
        "--out",
        p(&g),
    ]);
    assert!(fs::read_to_string(&g)
        .unwrap()
        .starts_with("beta,gamma,value,stddev\n"));
    for suffix in ["approx", "error", "bound", "cross"] {
        assert!(
            dir.path().join(format!("mean_{suffix}.csv")).exists(),
            "{suffix}"
        );
    }
}

#[test]
fn compare_emits_two_rows_per_instance() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    ok(&[
        "gen",
        "--family",
        "sat",
        "--n",
        "6",
        "--count",
        "5",
        "--seed",
        "2",
        "--out",
        p(&e),
    ]);
    let r = dir.path().join("r.csv");
    let j = dir.path().join("r.json");
    ok(&[
        "compare",
        "--ensemble",
        p(&e),
        "--shots",
        "50",
        "--seed",
        "3",
        "--out",
        p(&r),
        "--json",
        p(&j),
    ]);
    let csv = fs::read_to_string(&r).unwrap();
    assert_eq!(csv.lines().count(), 11);
    let report: Value = serde_json::from_str(&fs::read_to_string(&j).unwrap()).unwrap();
    assert_eq!(report["shots"], 50);
}

#[test]
fn summarize_and_optimize() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    let s = dir.path().join("s.json");
    ok(&[
        "gen",
        "--family",
        "qrfactor",
        "--n",
        "8",
        "--count",
        "4",
        "--out",
        p(&e),
    ]);
    ok(&["summarize", "--ensemble", p(&e), "--out", p(&s)]);
    let out = ok(&["optimize", "--summary", p(&s)]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["beta", "gamma", "value", "evaluations"] {
        assert!(r.get(key).is_some(), "{key}");
    }
    let out = ok(&["optimize", "--ensemble", p(&e), "--instance", "2"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r["value"].as_f64().unwrap() > 0.0);
}

#[test]
fn sat_alpha_has_one_row_per_alpha() {
    let out = ok(&[
        "sat-alpha",
        "--n",
        "5",
        "--alphas",
        "2,6",
        "--count",
        "4",
        "--shots",
        "10",
    ]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(
        cli(&["gen", "--family", "bogus", "--n", "3", "--count", "1", "--out", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.json");
    let usage = cli(&[
        "gen",
        "--family",
        "uniform",
        "--n",
        "3",
        "--t-size",
        "100",
        "--count",
        "1",
        "--out",
        p(&out),
    ]);
    assert_eq!(usage.status.code(), Some(1));
    // a clique spanning every vertex of a sparse graph never appears
    let hopeless = cli(&[
        "gen",
        "--family",
        "kclique",
        "--n",
        "20",
        "--k",
        "20",
        "--edge-prob",
        "0.01",
        "--count",
        "1",
        "--out",
        p(&out),
    ]);
    assert_eq!(hopeless.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&hopeless.stderr).contains("computation error"));
    let missing = cli(&["summarize", "--ensemble", p(&dir.path().join("nope.json"))]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_ensemble_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    fs::write(
        &e,
        r#"{"family":"uniform","n":3,"seed":0,"params":{"t_size":1},"instances":[{"id":0,"targets":[9],"meta":{}}]}"#,
    )
    .unwrap();
    let out = cli(&["summarize", "--ensemble", p(&e)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

fn pipeline_bytes(threads: &str, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let out_dir = dir.join(format!("out{threads}"));
    let config = dir.join(format!("config{threads}.json"));
    fs::write(
        &config,
        format!(
            r#"{{"seed":5,"family":"clustered","n":7,"count":6,"grid":{{"beta_min":0.0,"beta_max":3.0,"gamma_min":0.0,"gamma_max":6.0,"beta_steps":9,"gamma_steps":7}},"shots":20,"output_dir":{}}}"#,
            serde_json::to_string(out_dir.to_str().unwrap()).unwrap()
        ),
    )
    .unwrap();
    ok(&["--threads", threads, "run", "--config", p(&config)]);
    let mut files: Vec<_> = fs::read_dir(&out_dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "config.json")
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn run_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let one = pipeline_bytes("1", dir.path());
    assert_eq!(one.len(), 9);
    assert_eq!(one, pipeline_bytes("4", dir.path()));
    assert_eq!(one, pipeline_bytes("1", dir.path()));
}

#[test]
fn run_rejects_unknown_config_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    fs::write(
        &config,
        r#"{"seed":1,"family":"sat","n":6,"count":2,"output_dir":"o","colour":"red"}"#,
    )
    .unwrap();
    assert_eq!(cli(&["run", "--config", p(&config)]).status.code(), Some(1));
}
