use std::path::Path;
use std::process::{Command, Output};

fn bsz2d(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bsz2d"));
    cmd.args(args).env_remove("BSZ2D_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("BSZ2D_CACHE_DIR", dir);
    }
    cmd.output().expect("run bsz2d")
}

fn weight(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn moments_table_is_a_probability_measure() {
    let dir = tempfile::tempdir().unwrap();
    let w = weight(dir.path(), "ex1.json", r#"{"product": [-0.5]}"#);
    let o = bsz2d(&["moments", "--weight", &w, "--max-degree", "6"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[0], "0");
    assert!((first[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn lex_recurrence_collapses_to_half_identity() {
    let dir = tempfile::tempdir().unwrap();
    let w = weight(dir.path(), "ex1.json", r#"{"product": [-0.5]}"#);
    let report = dir.path().join("verdict.json");
    let o = bsz2d(
        &["recurrence", "--weight", &w, "--ordering", "lex", "--n", "4", "--m", "4", "--report", report.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut blocks = text.split("# ").filter(|s| !s.is_empty());
    let a = blocks.next().unwrap();
    for (i, line) in a.lines().skip(1).enumerate() {
        for (j, v) in line.split(',').enumerate() {
            let expect = if i == j { 0.5 } else { 0.0 };
            assert!((v.parse::<f64>().unwrap() - expect).abs() < 1e-8);
        }
    }
    let b = blocks.next().unwrap();
    assert!(b.lines().skip(1).flat_map(|l| l.split(',')).all(|v| v.parse::<f64>().unwrap() == 0.0));
    let verdict: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(verdict["passed"], true);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = weight(dir.path(), "bad.json", r#"{"product": [1.2]}"#);
    assert_eq!(bsz2d(&["verify", "--weight", &bad], None).status.code(), Some(2));
    let typo = weight(dir.path(), "typo.json", r#"{"prodcut": [0.2]}"#);
    assert_eq!(bsz2d(&["total", "--weight", &typo, "--n", "2"], None).status.code(), Some(2));
    assert_eq!(bsz2d(&["total", "--n", "2"], None).status.code(), Some(2));
    assert_eq!(bsz2d(&["total", "--weight", "/nonexistent.json", "--n", "2"], None).status.code(), Some(2));
    let ok = weight(dir.path(), "ok.json", r#"{"product": [0.3]}"#);
    assert_eq!(
        bsz2d(&["recurrence", "--weight", &ok, "--ordering", "lex", "--n", "2"], None).status.code(),
        Some(2)
    );
    assert_eq!(bsz2d(&["example", "--id", "ex2", "--b", "0.6"], None).status.code(), Some(2));
}

#[test]
fn example_report_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("ex2.json");
    let o = bsz2d(
        &["example", "--id", "ex2", "--a", "-0.4", "--b", "0.45", "--depth", "4", "--report", report.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(rep["passed"], true);
    assert!(rep["entries"].as_array().unwrap().iter().any(|e| e["tag"] == "example-2 recurrence"));
}

#[test]
fn verify_generic_weight() {
    let dir = tempfile::tempdir().unwrap();
    let w = weight(dir.path(), "g.json", r#"{"generic_h": [[1.0], [-0.6, -1.2], [0.36, 0.72], [-0.216]]}"#);
    let o = bsz2d(&["verify", "--weight", &w, "--depth", "4"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn output_is_deterministic_across_runs_threads_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let w = weight(dir.path(), "ex4.json", r#"{"product": [0.5, -0.3]}"#);
    let args = ["lex", "--weight", &w, "--n", "4", "--m", "4"];
    let a = stdout(&bsz2d(&args, None));
    let b = stdout(&bsz2d(&[&args[..], &["--threads", "1"]].concat(), None));
    assert_eq!(a, b);
    let c = stdout(&bsz2d(&args, Some(&cache)));
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
    let d = stdout(&bsz2d(&args, Some(&cache)));
    assert_eq!(a, c);
    assert_eq!(c, d);
}
