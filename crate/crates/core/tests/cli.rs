use std::path::Path;
use std::process::{Command, Output};

use moddata::modular::ModularData;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moddata")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn compute_to(dir: &Path, name: &str, spec: &str, u: u64) -> String {
    let path = dir.join(name);
    let out = run(&["compute", spec, "--u", &u.to_string(), "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path.to_str().unwrap().to_string()
}

#[test]
fn compute_reports_rank_and_checks() {
    let out = run(&["compute", "pq:3,7", "--u", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("rank 25"));
    assert!(text.contains("verification pass"));

    let out = run(&["compute", "--p", "5", "--q", "11", "--u", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rank"], 49);
    assert_eq!(v["verified"], true);
    assert_eq!(v["conductor"], 275);
}

#[test]
fn compute_rejects_invalid_input() {
    assert_eq!(code(&run(&["compute", "pq:3,5", "--u", "1"])), 2);
    assert_eq!(code(&run(&["compute", "nonsense"])), 2);
    assert_eq!(code(&run(&["compute", "pq:3,7", "--u", "3"])), 2);
    assert_eq!(code(&run(&["compute"])), 2);
}

#[test]
fn compute_output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = run(&["compute", "pq:5,11", "--u", "3", "--threads", threads, "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let md = ModularData::from_json(std::str::from_utf8(&ta).unwrap()).unwrap();
    assert_eq!(md.rank(), 49);
    assert_eq!(md.labels()[0].dim, 1);
}

#[test]
fn compare_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m1 = compute_to(dir.path(), "m1.json", "pq:5,11", 1);
    let m2 = compute_to(dir.path(), "m2.json", "pq:5,11", 2);
    let m4 = compute_to(dir.path(), "m4.json", "pq:5,11", 4);

    let out = run(&["compare", &m1, &m4, "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["equivalent"], true);
    let perm: Vec<usize> = serde_json::from_value(v["permutation"].clone()).unwrap();
    assert_eq!(perm.len(), 49);
    assert_eq!(perm[0], 0);

    assert_eq!(code(&run(&["compare", &m1, &m2])), 1);

    let out = run(&["compare", &m1, &m1]);
    assert_eq!(code(&out), 0);
    let ident: Vec<usize> = serde_json::from_str(stdout(&out).lines().nth(1).unwrap()).unwrap();
    assert_eq!(ident, (0..49).collect::<Vec<_>>());

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"meta\": 1}").unwrap();
    assert_eq!(code(&run(&["compare", &m1, bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["compare", &m1, "/nonexistent/file.json"])), 2);
}

#[test]
fn classify_totals() {
    for (p, q, total) in [("5", "11", 14), ("3", "5", 9), ("2", "7", 12)] {
        let out = run(&["classify", "--p", p, "--q", q, "--json"]);
        assert_eq!(code(&out), 0);
        let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(v["total"], total);
    }
    assert_eq!(code(&run(&["classify", "--p", "4", "--q", "7"])), 2);
    assert_eq!(code(&run(&["classify", "--p", "5", "--q", "9"])), 2);
}

#[test]
fn verify_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = compute_to(dir.path(), "m.json", "pq:3,7", 1);
    let out = run(&["verify", &path, "--t", "2"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("galois permutation"));

    let md = ModularData::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let half = moddata::cyclo::Cyclotomic::from_fraction(1, 2);
    let tampered = dir.path().join("t.json");
    std::fs::write(&tampered, md.with_s_entry(3, 4, half).to_json()).unwrap();
    assert_eq!(code(&run(&["verify", tampered.to_str().unwrap()])), 3);
}

#[test]
fn reproduce_small_case() {
    let out = run(&["reproduce", "--p", "5", "--q", "11", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let claims = v["claims"].as_array().unwrap();
    let ids: Vec<&str> = claims.iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, moddata::reproduce::catalog(5, false));
    for c in claims {
        assert_eq!(c["status"], "pass", "{c}");
    }
    assert_eq!(code(&run(&["reproduce", "--p", "3", "--q", "5"])), 2);
    assert_eq!(code(&run(&["reproduce", "--p", "5", "--q", "11", "--r", "31"])), 2);
}
