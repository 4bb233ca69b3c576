use std::path::PathBuf;
use std::process::{Command, Output};

use modgenus::configuration::SampleStats;
use modgenus::ribbon::CombinatorialMap;
use modgenus::CubicMultigraph;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modgenus")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn genus_examples() {
    for name in ["K5", "K33"] {
        let v = json(&["genus", "--builtin", name, "--exact"]);
        assert_eq!(v["exact"], 1, "{name}");
        assert_eq!(v["closed_form"], 1, "{name}");
    }
    let path = tmp("tree.mg");
    std::fs::write(&path, "4\n0 1\n1 2\n1 3\n").unwrap();
    let v = json(&["genus", "--file", path.to_str().unwrap()]);
    assert_eq!((v["report"]["lower_int"].as_u64(), v["report"]["upper_int"].as_u64()), (Some(0), Some(0)));
}

#[test]
fn enumerate_and_modular_examples() {
    assert_eq!(json(&["enumerate", "--n", "4", "--filter", "connected"])["count"], 5);
    assert_eq!(json(&["enumerate", "--n", "6"])["count"], 31);
    assert_eq!(json(&["enumerate", "--genus", "2"])["count"], 9);
    assert_eq!(json(&["modular", "curve", "--genus", "10"])["genus_report"]["exact"], 1);
    assert_eq!(json(&["modular", "curve", "--genus", "4"])["genus_report"]["exact"], 0);
    let mp = json(&["modular", "pants", "--genus", "2"]);
    assert_eq!((mp["summary"]["p"].as_u64(), mp["summary"]["q_simple"].as_u64()), (Some(2), Some(1)));
    let mf = json(&["modular", "flip", "--genus", "1", "--exact"]);
    assert_eq!((mf["summary"]["p"].as_u64(), mf["summary"]["loop_total"].as_u64()), (Some(1), Some(3)));
    let dot = stdout(&["modular", "pants", "--genus", "3", "--format", "dot"]);
    assert!(dot.starts_with("// p=5 "));
    let asym = json(&["asymptotics", "--max-pants-genus", "3", "--max-flip-genus", "1", "--max-n", "6"]);
    assert_eq!(asym["envelopes"].as_array().unwrap().len(), 6);
}

#[test]
fn exit_codes() {
    assert_eq!(exit_code(&["enumerate", "--n", "3"]), 2);
    assert_eq!(exit_code(&["sample-stats", "--n", "4", "--one-puncture", "--samples", "5"]), 2);
    assert_eq!(exit_code(&["modular", "pants", "--genus", "1"]), 2);
    assert_eq!(exit_code(&["enumerate", "--n", "16"]), 3);
    assert_eq!(exit_code(&["modular", "pants", "--genus", "8"]), 3);
    assert_eq!(exit_code(&["genus", "--builtin", "K8", "--exact", "--max-darts", "1000"]), 3);
    assert_eq!(exit_code(&["sample-stats", "--n", "102", "--one-puncture", "--max-attempts", "1", "--samples", "3"]), 3);
    let out = run(&["enumerate", "--n", "3"]);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn output_is_deterministic_across_workers() {
    let cases: [&[&str]; 4] = [
        &["sample-stats", "--n", "30", "--samples", "300", "--seed", "9", "--automorphisms"],
        &["sample-stats", "--n", "10", "--samples", "20", "--seed", "4", "--one-puncture"],
        &["flip-walk", "--genus", "2", "--steps", "200", "--seed", "3"],
        &["modular", "flip", "--genus", "2"],
    ];
    for args in cases {
        let base = stdout(args);
        assert_eq!(stdout(args), base, "{args:?}");
        for w in ["1", "2"] {
            let mut with = vec!["--workers", w];
            with.extend_from_slice(args);
            assert_eq!(stdout(&with), base, "{args:?} with {w} workers");
        }
    }
}

#[test]
fn emitted_files_parse_back() {
    let path = tmp("classes.txt");
    stdout(&["-o", path.to_str().unwrap(), "enumerate", "--n", "6", "--filter", "connected", "--format", "text"]);
    let text = std::fs::read_to_string(&path).unwrap();
    let graphs: Vec<CubicMultigraph> = text.split("\n\n").map(|b| b.parse().unwrap()).collect();
    assert_eq!(graphs.len(), 17);
    assert!(graphs.iter().all(|g| g.is_connected() && g.n_vertices() == 6));

    let walk = stdout(&["flip-walk", "--genus", "2", "--steps", "50", "--format", "text"]);
    let m: CombinatorialMap = walk.parse().unwrap();
    let inv = m.surface_invariants().unwrap();
    assert_eq!((inv.n_punctures, inv.genus), (1, 2));
    assert_eq!(m.to_string(), walk);

    let summary = json(&["flip-walk", "--genus", "2", "--steps", "50"]);
    assert_eq!(summary["final_map"].as_str().unwrap(), walk);
    assert_eq!(summary["invariants_preserved"], true);
    assert_eq!(summary["double_flip_identity"], true);

    let stats: SampleStats = serde_json::from_str(&stdout(&["sample-stats", "--n", "20", "--samples", "50"])).unwrap();
    assert_eq!((stats.n_vertices, stats.n_samples), (20, 50));
    let csv = stdout(&["sample-stats", "--n", "20", "--samples", "50", "--format", "csv"]);
    assert_eq!(csv.lines().count(), 4);
    for (line, k) in csv.lines().skip(1).zip(1..) {
        let mean: f64 = line.split(',').nth_back(1).unwrap().parse().unwrap();
        assert_eq!(mean, stats.circuit_means[&k]);
    }
}
