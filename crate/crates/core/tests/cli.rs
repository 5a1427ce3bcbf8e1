mod common;

use std::path::Path;
use std::process::{Command, Output};

use aqfp_bsopt::netlist::serialize;
use common::{corpus_path, random_circuit};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqfp-bsopt")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn write_circuit(dir: &Path, name: &str, seed: u64, gates: usize) -> String {
    let path = dir.join(format!("{name}.bench"));
    std::fs::write(&path, serialize(&random_circuit(seed, 6, gates), None)).unwrap();
    path.to_string_lossy().into_owned()
}

fn metrics(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn optimize_writes_netlist_and_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), "small", 1, 40);
    let out = dir.path().join("out.bench");
    let o = run(&["optimize", "--skip", "1", "--max-fanout", "4", "--seed", "7", &input, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists());
    let m = metrics(&dir.path().join("out.metrics.json"));
    for key in ["benchmark", "skip", "buffers", "splitters", "total", "iterations", "runtime_ms"] {
        assert!(m.get(key).is_some(), "missing {key}");
    }
    assert_eq!(m["skip"], 1);
    assert_eq!(m["total"].as_u64(), Some(m["buffers"].as_u64().unwrap() + m["splitters"].as_u64().unwrap()));

    let v = run(&["verify", "--skip", "1", &input, out.to_str().unwrap()]);
    assert_eq!(code(&v), 0);
    let strict = run(&["verify", "--skip", "0", "--json", &input, out.to_str().unwrap()]);
    assert_eq!(code(&strict), 4);
    let report: Value = serde_json::from_slice(&strict.stdout).unwrap();
    assert!(!report["legality"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), "rep", 5, 50);
    let a = run(&["optimize", "--skip", "2", "--format", "json", &input]);
    let b = run(&["optimize", "--skip", "2", "--format", "json", &input]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["nodes"].as_array().unwrap().len() > 50);
}

#[test]
fn usage_and_input_errors() {
    let c432 = corpus_path("c432");
    assert_eq!(code(&run(&["optimize", "--skip", "5", c432.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["optimize", "--lp", "fancy", c432.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["verify", c432.to_str().unwrap(), "/nonexistent/x.bench"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.bench");
    std::fs::write(&bad, "INPUT(a)\ng = FOO(a)\n").unwrap();
    assert_eq!(code(&run(&["optimize", bad.to_str().unwrap()])), 2);
}

#[test]
fn corrupted_pair_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), "pair", 3, 30);
    let out = dir.path().join("pair_opt.bench");
    assert_eq!(code(&run(&["optimize", &input, "-o", out.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains(" = AND("));
    let corrupted = text.replacen(" = AND(", " = OR(", 1);
    std::fs::write(&out, corrupted).unwrap();
    let v = run(&["verify", &input, out.to_str().unwrap()]);
    assert_eq!(code(&v), 4);
    assert!(!v.stdout.is_empty());
}

#[test]
fn exact_mode_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_circuit(dir.path(), "thirty", 8, 30);
    let out = dir.path().join("thirty_opt.bench");
    let o = run(&["optimize", "--lp", "exact", "--skip", "1", &input, "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(metrics(&dir.path().join("thirty_opt.metrics.json"))["exact"], true);
}

#[test]
fn reduce_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let runs = dir.path().join("runs");
    std::fs::create_dir(&runs).unwrap();
    for (name, seed) in [("alpha", 11), ("beta", 12)] {
        let input = write_circuit(dir.path(), name, seed, 40);
        for skip in ["0", "2"] {
            let out = dir.path().join(format!("{name}_s{skip}.bench"));
            let m = runs.join(format!("{name}_s{skip}.json"));
            let o = run(&[
                "optimize", "--skip", skip, &input, "-o", out.to_str().unwrap(), "--metrics", m.to_str().unwrap(),
            ]);
            assert_eq!(code(&o), 0);
        }
    }
    let o = run(&["report", runs.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "benchmark,method,skip,buffers,splitters,total");
    assert_eq!(lines.len(), 6, "{csv}");
    let total = |row: &str| row.rsplit(',').next().unwrap().parse::<f64>().unwrap();
    let expected = ((1.0 - total(lines[2]) / total(lines[1])) + (1.0 - total(lines[4]) / total(lines[3]))) / 2.0;
    let shown: f64 = lines[5].rsplit(',').next().unwrap().trim_end_matches('%').parse().unwrap();
    assert!((shown - 100.0 * expected).abs() < 0.051, "{csv}");

    let s0 = dir.path().join("alpha_s0.bench");
    let red = dir.path().join("alpha_r2.bench");
    let o = run(&["reduce", "--skip", "2", s0.to_str().unwrap(), "-o", red.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let m = metrics(&dir.path().join("alpha_r2.metrics.json"));
    assert_eq!(m["method"], "reduce");
    let alpha = dir.path().join("alpha.bench");
    assert_eq!(code(&run(&["verify", "--skip", "2", alpha.to_str().unwrap(), red.to_str().unwrap()])), 0);

    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    let o = run(&["report", empty.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "benchmark,method,skip,buffers,splitters,total\n");
    std::fs::write(empty.join("broken.json"), "{\"benchmark\": 3}").unwrap();
    assert_eq!(code(&run(&["report", empty.to_str().unwrap()])), 2);
}
