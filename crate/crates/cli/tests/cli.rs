use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn aligndist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aligndist")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read_outputs(dir: &Path, command: &str) -> (Vec<u8>, Vec<u8>) {
    (fs::read(dir.join(format!("{command}.csv"))).unwrap(), fs::read(dir.join(format!("{command}.json"))).unwrap())
}

#[test]
fn lambda_runs_are_byte_identical() {
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    for (dir, threads) in dirs.iter().zip(["1", "1", "3"]) {
        let out = aligndist(&[
            "lambda", "--n", "2", "--trials", "1", "--seed", "7", "--threads", threads, "--out-dir",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let first = read_outputs(dirs[0].path(), "lambda");
    assert_eq!(first, read_outputs(dirs[1].path(), "lambda"));
    assert_eq!(first, read_outputs(dirs[2].path(), "lambda"));
    let csv = String::from_utf8(first.0).unwrap();
    assert!(csv.starts_with("seed,config_hash,n,statistic,value\n7,"));
}

#[test]
fn experiments_are_thread_count_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "4")] {
        let out = aligndist(&[
            "point-convergence", "--n-grid", "8,16", "--trials", "6", "--seed", "11", "--threads", threads,
            "--out-dir", dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(read_outputs(a.path(), "point-convergence"), read_outputs(b.path(), "point-convergence"));
}

#[test]
fn replaying_an_emitted_report_reproduces_it() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let out = aligndist(&["tail-check", "--n", "20", "--trials", "30", "--out-dir", first.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed: "), "generated seed is echoed");
    let report = first.path().join("tail-check.json");
    let out =
        aligndist(&["tail-check", "--config", report.to_str().unwrap(), "--out-dir", second.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(read_outputs(first.path(), "tail-check"), read_outputs(second.path(), "tail-check"));
}

#[test]
fn align_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = aligndist(&[
        "align", "--x", "aabb", "--y", "abab", "--scoring", "lcs", "--seed", "1", "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("align: score 3 "));
    assert!(text.contains("optimal  (1/4, 0, 1/4, 0, 1/2, 0, 1/4, 0)"));
    assert!(text.contains("feasible (1/4, 1/4, 0, 1/4, 1/4, 0, 0, 0)"));
    assert!(text.contains("feasible (1/4, 1/4, 0, 0, 1/4, 1/4, 1/4, 0)"));
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("align.json")).unwrap()).unwrap();
    assert_eq!(json["report"]["score"], 3.0);
    assert_eq!(json["report"]["optimal_exhaustive"], true);
}

#[test]
fn align_cap_exceeded_still_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = aligndist(&[
        "align", "--n", "12", "--cap", "2", "--seed", "3", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("align.json")).unwrap()).unwrap();
    assert_eq!(json["report"]["feasible_exhaustive"], false);
}

#[test]
fn constant_scoring_fluctuation_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = aligndist(&[
        "fluctuation", "--scoring", "constant:0.5", "--n-grid", "10,20", "--trials", "10", "--p-hat-n", "20",
        "--seed", "2", "--out-dir", dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "fluctuation: criterion not met (value 0)");
}

#[test]
fn bad_config_exits_one_and_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    for (config, field) in [
        (r#"{"trials": "many"}"#, "`trials`"),
        (r#"{"trails": 3}"#, "`trails`"),
        (r#"{"probs_x": [0.9, 0.3]}"#, "`probs_x`"),
        (r#"{"n_grid": [8, 4]}"#, "`n_grid`"),
        (r#"{"scoring": "sphere:x"}"#, "`scoring`"),
        (r#"{"command": "lambda"}"#, "`command`"),
    ] {
        fs::write(&path, config).unwrap();
        let out = aligndist(&["point-convergence", "--seed", "1", "--config", path.to_str().unwrap(), "--out-dir",
            dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{config}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{config}: {err}");
    }
    let out = aligndist(&["lambda", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, r#"{"n": 5, "trials": 2, "seed": 9}"#).unwrap();
    let out = aligndist(&["lambda", "--config", path.to_str().unwrap(), "--n", "6", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("lambda.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["n"], 6);
    assert_eq!(json["config"]["trials"], 2);
    assert_eq!(json["seed"], 9);
}

#[test]
fn lpp_reports_proportions() {
    let dir = tempfile::tempdir().unwrap();
    let out = aligndist(&["lpp", "--x", "aabb", "--y", "abab", "--seed", "1", "--out-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("lpp: n=4 max weight 3 via "));
}
