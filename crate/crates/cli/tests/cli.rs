use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn asdlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_asdlab")).args(args).env_remove("ASDLAB_CACHE").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn galois_table_is_deterministic() {
    let a = asdlab(&["galois-table"]);
    let b = asdlab(&["galois-table"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["rows"][0]["discriminant"], "-13824");
}

#[test]
fn table1_matches() {
    let o = asdlab(&["table1", "--format", "csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 19);
    assert!(out.contains("\"table1\",\"53\",\"-47\",\"-47\",\"true\""));
}

#[test]
fn verify_single_prime_with_controls() {
    let o = asdlab(&["verify", "--prime", "5", "--max-index", "200"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    let perturbed: Vec<_> = rows.iter().filter(|r| r["expect"] == "fail").collect();
    assert_eq!(perturbed.len(), 2);
    for r in perturbed {
        assert_eq!(r["passed"], false);
        assert_eq!(r["first_failure"], 1);
    }
}

#[test]
fn compare_small_range() {
    let o = asdlab(&["compare", "--pmax", "23", "--format", "text"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("PASS\n"));
}

#[test]
fn count_and_charpoly() {
    let o = asdlab(&["count", "--prime", "7", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = asdlab(&["charpoly", "--prime", "13", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c: Vec<i64> = v["coefficients"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    assert_eq!(c, vec![28561, 6760, 738, 40, 1]);
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert_eq!(asdlab(&["table1", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(asdlab(&["table1", "--prec", "10"]).status.code(), Some(2));
    assert_eq!(asdlab(&["charpoly", "--group", "5", "--prime", "7"]).status.code(), Some(2));
}

fn cache_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn warm_cache_removes_counting_work() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let caps = ["--bsgs-cap", "300000", "--cache-dir", d];
    let warm = asdlab(&[&["cache", "warm", "--pmax", "53"][..], &caps].concat());
    assert!(warm.status.success(), "{}", stderr(&warm));
    let t = asdlab(&[&["table2"][..], &caps].concat());
    assert!(t.status.success(), "{}", stderr(&t));
    assert!(stderr(&t).contains("trace tables counted: 0"), "{}", stderr(&t));

    // a damaged file is ignored with a warning and recomputed
    let victim = dir.path().join("fibers-p13-r1.json");
    let text = fs::read_to_string(&victim).unwrap();
    fs::write(&victim, text.replacen("\"traces\":[", "\"traces\":[1,", 1)).unwrap();
    let t = asdlab(&[&["charpoly", "--prime", "13"][..], &caps].concat());
    assert!(t.status.success());
    assert!(stderr(&t).contains("ignoring"), "{}", stderr(&t));
    assert!(stdout(&t).contains("28561"));

    let c = asdlab(&[&["cache", "clear"][..], &caps].concat());
    assert!(c.status.success());
    let l = asdlab(&[&["cache", "list"][..], &caps].concat());
    let v: serde_json::Value = serde_json::from_str(&stdout(&l)).unwrap();
    assert!(v["files"].as_array().unwrap().is_empty());
    assert!(cache_files(dir.path()).is_empty());
}

#[test]
fn env_var_overrides_cache_dir() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_asdlab"))
        .args(["count", "--prime", "5", "--cache-dir", flag_dir.path().to_str().unwrap()])
        .env("ASDLAB_CACHE", env_dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(cache_files(env_dir.path()), vec!["fibers-p5-r1.json".to_string()]);
    assert!(cache_files(flag_dir.path()).is_empty());
}
