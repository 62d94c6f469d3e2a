use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run dlab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn generate_solve_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "2", "--out", "i.json"])), 0);
    let o = dlab(
        d,
        &["solve", "cp", "--instance", "i.json", "--proof", "p.json", "--cut", "cg-objective"],
    );
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("status: OPTIMAL"), "{out}");
    assert!(out.contains("iterations: 2"), "{out}");
    assert!(out.contains("bound: 2"), "{out}");
    let o = dlab(d, &["verify", "--instance", "i.json", "--proof", "p.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("ACCEPT"), "{}", stdout(&o));
}

#[test]
fn tree_engines_and_transforms() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "1", "--out", "i.json"])), 0);
    for (method, extra) in [("bb", vec![]), ("bc", vec!["--bc-rule", "rounds:2"])] {
        let mut args = vec!["solve", method, "--instance", "i.json", "--proof", "t.json"];
        args.extend(extra);
        assert_eq!(code(&dlab(d, &args)), 0, "{method}");
        assert_eq!(code(&dlab(d, &["verify", "--instance", "i.json", "--proof", "t.json"])), 0);
        let o = dlab(d, &["transform", "bc2cp", "--instance", "i.json", "--in", "t.json", "--out", "c.json"]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        assert_eq!(code(&dlab(d, &["verify", "--instance", "i.json", "--proof", "c.json"])), 0);
    }
    let o = dlab(d, &["transform", "cp2bb", "--instance", "i.json", "--in", "c.json", "--out", "b.json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(code(&dlab(d, &["verify", "--instance", "i.json", "--proof", "b.json"])), 0);
}

#[test]
fn fixed_branching_order_is_one_based() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "bcube", "--n", "2", "--out", "i.json"])), 0);
    let o = dlab(
        d,
        &[
            "solve", "bb", "--instance", "i.json", "--proof", "t.json", "--branch-order", "1:1,2:0", "--prove-bound", "0",
        ],
    );
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("status: BOUND_PROVED"), "{out}");
    assert!(out.contains("proof_size: 4"), "{out}");
}

#[test]
fn minimum_tree_size() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "1", "--out", "i.json"])), 0);
    let o = dlab(d, &["minbb", "--instance", "i.json", "--gamma", "1"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "2".to_string()));
    // below the integer optimum there is nothing to prove
    let o = dlab(d, &["minbb", "--instance", "i.json", "--gamma", "1/2"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn integral_instance_needs_no_cuts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let inst = r#"{"version":1,"dim":2,
        "ineqs":[{"a":["1","0"],"b":"1"},{"a":["-1","0"],"b":"0"},{"a":["0","1"],"b":"1"},{"a":["0","-1"],"b":"0"}],
        "objective":["1","1"],"integrality":[true,true],"claimed_bound":"2"}"#;
    fs::write(d.join("i.json"), inst).unwrap();
    let o = dlab(d, &["solve", "cp", "--instance", "i.json", "--proof", "p.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("iterations: 0"), "{}", stdout(&o));
    assert_eq!(code(&dlab(d, &["verify", "--instance", "i.json", "--proof", "p.json"])), 0);
}

#[test]
fn tampered_proof_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "1", "--out", "i.json"])), 0);
    let o = dlab(
        d,
        &["solve", "cp", "--instance", "i.json", "--proof", "p.json", "--cut", "cg-objective"],
    );
    assert_eq!(code(&o), 0);
    let proof = fs::read_to_string(d.join("p.json")).unwrap();
    let value: serde_json::Value = serde_json::from_str(&proof).unwrap();
    let mut tampered = value.clone();
    tampered["target"]["b"] = serde_json::Value::String("1/2".into());
    fs::write(d.join("bad.json"), tampered.to_string()).unwrap();
    let o = dlab(d, &["verify", "--instance", "i.json", "--proof", "bad.json"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("REJECT"), "{}", stdout(&o));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["solve"])), 2);
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "x", "--out", "i.json"])), 2);
    assert_eq!(code(&dlab(d, &["verify", "--instance", "missing.json", "--proof", "p.json"])), 2);
    fs::write(d.join("junk.json"), "{not json").unwrap();
    assert_eq!(code(&dlab(d, &["verify", "--instance", "junk.json", "--proof", "junk.json"])), 2);
}

#[test]
fn closure_and_rank() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["gen", "k3copies", "--m", "1", "--out", "i.json"])), 0);
    let o = dlab(
        d,
        &["closure", "--instance", "i.json", "--rounds", "1", "--out", "c.json", "--csv", "c.csv"],
    );
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(d.join("c.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3, "{csv}");
    let o = dlab(d, &["rank", "--instance", "i.json", "--ineq", "1,1,1;1"]);
    assert_eq!((code(&o), stdout(&o).trim().to_string()), (0, "1".to_string()));
}

fn without_wall_clock(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(rest, _)| rest))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn table_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&dlab(d, &["experiment", "table1", "--out", "a.csv"])), 0);
    assert_eq!(code(&dlab(d, &["experiment", "table1", "--out", "b.csv"])), 0);
    let a = fs::read_to_string(d.join("a.csv")).unwrap();
    let b = fs::read_to_string(d.join("b.csv")).unwrap();
    assert!(a.starts_with("# dlab table1 schema v1\ninstance,params,family,method,measure,value,bound_achieved,status,wall_ms\n"));
    assert_eq!(without_wall_clock(&a), without_wall_clock(&b));
    assert!(a.contains("k3copies,m=4,variable,bb,tree_size,30,4/1,OPTIMAL,"), "{a}");
}
