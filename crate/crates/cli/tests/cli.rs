use std::path::Path;
use std::process::{Command, Output};

use dimerlab::kasteleyn::KasteleynSystem;
use dimerlab::scalar::Rational;
use dimerlab::spec::parse_graph;
use dimerlab::zoo::is_ladder;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimerlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or(Value::Null);
    (o.status.code().unwrap(), v)
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> String {
    let out = path(dir, name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &out]);
    assert!(run(&all).status.success());
    out
}

#[test]
fn six_vertex_center_edge_is_exact() {
    let (code, v) = json(&[
        "stats", "--gen", "six-vertex", "--rows", "3", "--cols", "3", "--theta", "3/5,4/5", "--edge", "center-east",
    ]);
    assert_eq!(code, 0);
    let mean = v["edges"]["b1_1E"]["mean"].as_str().unwrap();
    assert!(mean.starts_with("337/625 ≈ 0.5392"), "{mean}");
}

#[test]
fn grid_report_with_covariance() {
    let (code, v) = json(&["stats", "--gen", "grid", "--N", "4", "--n", "2", "--edge", "v0", "--covariance", "v0,v2"]);
    assert_eq!(code, 0);
    assert_eq!(v["Z"], "64 ≈ 64");
    assert_eq!(v["edges"]["v0"]["pmf"].as_array().unwrap().len(), 3);
    assert!(v["covariance"]["v0,v2"].is_string());
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let dir = tempfile::tempdir().unwrap();
    let square = generate(dir.path(), "square.json", &["--gen", "square", "--n", "2", "--random", "3"]);
    let (code, v) = json(&["verify", &square]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
    let (code, v) = json(&["verify", "--transpose-weights", &square]);
    assert_eq!((code, v["verdict"].as_str()), (1, Some("fail")));
    let mixed = generate(dir.path(), "mixed.json", &["--gen", "mixed"]);
    let (code, v) = json(&["verify", &mixed]);
    assert_eq!(code, 0);
    assert_eq!(v["covers"], 5);
    assert_eq!(v["oracle_Z"], "6 ≈ 6");
}

#[test]
fn contraction_then_merge_turns_the_snake_into_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let snake = generate(dir.path(), "snake.json", &["--gen", "snake", "--word", "NE", "--n", "2", "--random", "5"]);
    let c = path(dir.path(), "c.json");
    let p = path(dir.path(), "p.json");
    let (code, v) = json(&["move", "--kind", "contract", "--vertex", "p0_2", &snake, "--out", &c]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
    let (code, v) = json(&[
        "move", "--kind", "parallel_reduce", "--white", "p0_1+p1_2", "--black", "p1_1", &c, "--out", &p,
    ]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("pass")));
    let read = |f: &str| parse_graph::<Rational>(&std::fs::read_to_string(f).unwrap()).unwrap();
    let grid = read(&p);
    assert!(is_ladder(&grid));
    assert_eq!(grid.num_edges(), 7);
    let z = |f: &str| KasteleynSystem::new(&read(f)).unwrap().partition_function();
    assert_eq!(z(&c), z(&p));
}

#[test]
fn square_move_reports_a_factor() {
    let dir = tempfile::tempdir().unwrap();
    let grid = generate(dir.path(), "grid.json", &["--gen", "grid", "--N", "2", "--n", "2", "--random", "1"]);
    let (code, v) = json(&["move", "--kind", "square", "--face", "f1", &grid]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["factor_relation"], "pass");
}

#[test]
fn sampling_is_reproducible_and_roughly_fair() {
    let dir = tempfile::tempdir().unwrap();
    let square = generate(dir.path(), "square.json", &["--gen", "square", "--n", "1"]);
    let one = run(&["sample", "--count", "1", "--seed", "7", &square]);
    assert!(one.status.success());
    let first = stdout(&one).lines().next().unwrap().to_string();
    let cover: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(cover.as_object().unwrap().len(), 2);
    assert_eq!(stdout(&one), stdout(&run(&["sample", "--count", "1", "--seed", "7", &square])));

    let (_, v) = json(&["sample", "--count", "10000", "--seed", "1", &square]);
    for f in v["frequencies"].as_array().unwrap() {
        let x: f64 = f["frequency"].as_str().unwrap().parse().unwrap();
        assert!((x - 0.5).abs() < 0.03, "{x}");
    }
    let mixed = generate(dir.path(), "mixed.json", &["--gen", "mixed"]);
    let (_, v) = json(&["sample", "--count", "10000", "--seed", "2", &mixed]);
    let freqs = v["frequencies"].as_array().unwrap();
    assert_eq!(freqs.len(), 5);
    for f in freqs {
        let x: f64 = f["frequency"].as_str().unwrap().parse().unwrap();
        let p = f["probability"].as_str().unwrap();
        let want = if p.starts_with("1/3") { 1.0 / 3.0 } else { 1.0 / 6.0 };
        assert!((x - want).abs() < 0.03, "{x} vs {p}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["stats"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "--gen", "grid", "--edge", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["stats", "/no/such/file.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let snake = generate(dir.path(), "snake.json", &["--gen", "snake", "--word", "NE"]);
    let mut spec: Value = serde_json::from_str(&std::fs::read_to_string(&snake).unwrap()).unwrap();
    for e in spec["edges"].as_array_mut().unwrap() {
        if e["id"] == "v0_1" {
            e["weight"] = serde_json::json!([["0"]]);
        }
    }
    let bad = path(dir.path(), "bad.json");
    std::fs::write(&bad, spec.to_string()).unwrap();
    assert_eq!(run(&["move", "--kind", "contract", "--vertex", "p0_2", &bad]).status.code(), Some(3));
}

#[test]
fn reports_are_byte_stable() {
    let args = ["stats", "--gen", "snake", "--word", "NEN", "--n", "2", "--random", "4"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}
