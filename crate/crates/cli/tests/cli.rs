use std::process::{Command, Output};

use insola_cli::points::read_points;
use serde_json::Value;

fn insola(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_insola"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let idx = r.headers().unwrap().iter().position(|h| h == name).unwrap();
    r.records()
        .map(|rec| rec.unwrap()[idx].to_string())
        .collect()
}

#[test]
fn walk_numerical_example() {
    let o = insola(&[
        "walk",
        "--ode",
        "(x+1)*z - 1",
        "--y0",
        "0",
        "--steps",
        "1/2,1/2",
        "--degree",
        "2",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("t,value_exact,value_re,value_im,step,degree\n"));
    assert_eq!(csv_column(&text, "value_exact"), ["0", "3/8", "47/72"]);
    assert_eq!(csv_column(&text, "t"), ["0", "1/2", "1"]);
    assert_eq!(csv_column(&text, "value_re")[1], "3.7500000000000000e-1");
}

#[test]
fn walk_good_example_and_empty_steps() {
    let o = insola(&[
        "walk", "--ode", "z - 2*x", "--y0", "0", "--steps", "1,1", "--degree", "2",
    ]);
    assert_eq!(csv_column(&stdout(&o), "value_exact"), ["0", "1", "4"]);
    let o = insola(&[
        "walk", "--ode", "z - 2*x", "--y0", "0", "--steps", "", "--degree", "2",
    ]);
    assert!(o.status.success());
    assert_eq!(csv_column(&stdout(&o), "value_exact").len(), 1);
}

fn classify(ode: &str, f: &str) -> Value {
    let o = insola(&["classify", "--ode", ode, "--f", f]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn classify_examples() {
    let v = classify("z - 3*x^2", "x^3");
    assert_eq!(v["residual"], "3*x*a + a^2");
    assert_eq!(v["tag"], "HyperSolution");
    assert_eq!(
        classify("z - y", "1 + x + 1/2*x^2 + x^3")["tag"],
        "HyperLocal"
    );
    let v = classify("z - y", "1 + x + 1/2*x^2 + 1/6*x^3");
    assert_eq!(
        (v["tag"].as_str(), v["r"].as_str(), v["n"].as_u64()),
        (Some("HyperTaylor"), Some("-1/6"), Some(3))
    );
    let v = classify("z - y", "0");
    assert_eq!(
        (v["residual"].as_str(), v["tag"].as_str()),
        (Some("0"), Some("HyperSolution"))
    );
    assert_eq!(classify("z - y", "1")["domain"], Value::Null);
}

#[test]
fn transported_scale() {
    let o = insola(&[
        "transported",
        "--ode",
        "x*z - 1",
        "--f",
        "x - 1/2*x^2",
        "--rule",
        "scale",
        "--probes",
        "2,-1/3",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let tags: Vec<_> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["tag"].as_str().unwrap())
        .collect();
    assert_eq!(tags, ["HyperTaylor", "HyperTaylor"]);
    assert_eq!(v[0]["x0"], "2");
    assert_eq!(v[1]["x0"], "-1/3");
}

#[test]
fn exit_codes() {
    let o = insola(&["solve", "--oracle", "exp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(
        insola(&["classify", "--ode", "z - q", "--f", "x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(insola(&["solve", "--ode", "z - y"]).status.code(), Some(1));
    assert_eq!(
        insola(&["solve", "--ode", "z - y", "--oracle", "exp", "--y0", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(insola(&["--help"]).status.code(), Some(0));
    // x = 0 makes every degree of x*z - 1 fail.
    let o = insola(&[
        "solve",
        "--ode",
        "x*z - 1",
        "--y0",
        "0",
        "--max-degree",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn partial_failure_exits_two() {
    // z^2 = 4x^2 has a single recipe up to degree 2 and two from degree 3 on.
    let o = insola(&[
        "solve",
        "--ode",
        "z^2 - 4*x^2",
        "--y0",
        "0",
        "--branch",
        "1",
        "--max-degree",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("degree 1: branch 1") && err.contains("degree 2: branch 1"));
    let pts = read_points(o.stdout.as_slice()).unwrap();
    assert!(pts.iter().all(|p| p.grade >= 3));
}

#[test]
fn solve_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pts.csv");
    let json = dir.path().join("pts.json");
    let svg = dir.path().join("fig.svg");
    let svg2 = dir.path().join("fig2.svg");
    let run = |svg_path: &std::path::Path| {
        insola(&[
            "solve",
            "--ode",
            "z^2 + y^2 - 1",
            "--oracle",
            "sin",
            "--filter",
            "--max-degree",
            "12",
            "--out",
            csv.to_str().unwrap(),
            "--json",
            json.to_str().unwrap(),
            "--svg",
            svg_path.to_str().unwrap(),
        ])
    };
    let o = run(&svg);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let pts = read_points(std::fs::File::open(&csv).unwrap()).unwrap();
    assert!(!pts.is_empty());
    assert!(pts.iter().any(|p| !p.survivor));
    let v: Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), pts.len());
    assert!(v[0]["reference"].is_array());
    run(&svg2);
    let a = std::fs::read(&svg).unwrap();
    assert_eq!(a, std::fs::read(&svg2).unwrap());
    assert!(String::from_utf8(a).unwrap().contains("<polyline"));
}

#[test]
fn sweep_summary() {
    let o = insola(&[
        "sweep",
        "--ode",
        "z - y",
        "--oracle",
        "exp",
        "--max-degree",
        "10",
        "--alphas",
        "1e-3,1e-4",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("alpha_star,max_survivor_modulus,survivors,points\n"));
    assert_eq!(text.lines().count(), 3);
}
