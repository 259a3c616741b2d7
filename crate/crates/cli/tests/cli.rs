use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn lyat(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lyat"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn lyat")
}

fn lyat_stdin(args: &[&str], dir: &Path, input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lyat"))
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn lyat");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &[u8]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

/// `h1.json` (algebra) and `e1.json` (its central extension).
fn h1_files(dir: &Path) {
    let a = lyat(&["builtin", "heisenberg", "--n", "1"], dir);
    assert_eq!(a.status.code(), Some(0));
    write(dir, "h1.json", &a.stdout);
    let e = lyat(&["builtin", "heisenberg", "--n", "1", "--central"], dir);
    assert_eq!(e.status.code(), Some(0));
    write(dir, "e1.json", &e.stdout);
}

#[test]
fn builtin_pipes_into_validate() {
    let d = tempfile::tempdir().unwrap();
    let alg = lyat(&["builtin", "heisenberg", "--n", "1"], d.path());
    let o = lyat_stdin(&["validate", "-"], d.path(), &alg.stdout);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all axioms pass"));
}

#[test]
fn identity_pair_is_induced_by_identity() {
    let d = tempfile::tempdir().unwrap();
    h1_files(d.path());
    let pair = lyat(&["builtin", "family-pair", "--n", "1"], d.path());
    write(d.path(), "id.json", &pair.stdout);
    let o = lyat(&["--format", "json", "induce", "e1.json", "id.json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["inducible"], true);
    let gamma = &v["result"]["certificate"]["gamma"];
    assert_eq!(gamma, &serde_json::json!([["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]));
}

#[test]
fn scaling_psi_without_phi_is_not_inducible() {
    let d = tempfile::tempdir().unwrap();
    h1_files(d.path());
    write(d.path(), "p.json", br#"{"phi":[["1"]],"psi":[["2","0"],["0","2"]]}"#);
    let o = lyat(&["--format", "json", "induce", "e1.json", "p.json"], d.path());
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["reason"], "nontrivial_class");
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["inputs"].as_array().unwrap().len(), 2);
}

#[test]
fn relations_for_h1() {
    let d = tempfile::tempdir().unwrap();
    h1_files(d.path());
    let o = lyat(&["relations", "h1.json"], d.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("x11*x22 - x12*x21 - k ")));
    let j = lyat(&["--format", "json", "relations", "h1.json"], d.path());
    let v: Value = serde_json::from_slice(&j.stdout).unwrap();
    let rels = v["result"]["relations"].as_array().unwrap();
    assert!(rels.iter().any(|r| r["text"] == "x11*x22 - x12*x21 - k"));
}

#[test]
fn bad_input_exits_two() {
    let d = tempfile::tempdir().unwrap();
    let bad_index = br#"{"field":{"kind":"rational"},"dim":2,"ternary":[{"i":0,"j":1,"k":7,"value":[]}]}"#;
    let o = lyat_stdin(&["validate", "-"], d.path(), bad_index);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ternary[0]"));
    let zero_den = br#"{"field":{"kind":"rational"},"dim":2,"binary":[{"i":0,"j":1,"value":[{"k":0,"c":"1/0"}]}]}"#;
    assert_eq!(lyat_stdin(&["validate", "-"], d.path(), zero_den).status.code(), Some(2));
    assert_eq!(lyat(&["info", "missing.json"], d.path()).status.code(), Some(2));
    assert_eq!(lyat(&["builtin", "heisenberg", "--n", "1", "--field", "prime"], d.path()).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    h1_files(d.path());
    let run = || lyat(&["--format", "json", "cohomology", "h1.json"], d.path()).stdout;
    let (a, b) = (run(), run());
    assert_eq!(a, b);
    let v: Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn enumeration_agrees_over_f3() {
    let d = tempfile::tempdir().unwrap();
    h1_files(d.path());
    let o = lyat(&["--format", "json", "enumerate", "e1.json", "--check", "inducible", "--p", "3"], d.path());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["pairs"], v["result"]["agree"]);
    let seq = lyat(&["enumerate", "e1.json", "--check", "sequences", "--p", "3"], d.path());
    assert_eq!(seq.status.code(), Some(0));
}

#[test]
fn central_extension_of_total_round_trips() {
    let d = tempfile::tempdir().unwrap();
    let g = lyat(&["builtin", "gheisenberg", "--n", "1"], d.path());
    write(d.path(), "g1.json", &g.stdout);
    let e = lyat(&["extension", "from-total", "g1.json"], d.path());
    assert_eq!(e.status.code(), Some(0));
    let o = lyat_stdin(&["validate", "-"], d.path(), &e.stdout);
    assert_eq!(o.status.code(), Some(0));
    let out = d.path().join("again.json");
    let again = lyat(&["extension", "from-total", "g1.json", "--out", out.to_str().unwrap()], d.path());
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(out).unwrap(), e.stdout);
}

#[test]
fn conditions_and_crosscheck() {
    let d = tempfile::tempdir().unwrap();
    let fam = lyat(&["builtin", "family-pair", "--n", "2", "--kappa", "3", "--perm", "1,0", "--s", "1,-2"], d.path());
    assert_eq!(fam.status.code(), Some(0));
    write(d.path(), "fam.json", &fam.stdout);
    let o = lyat(&["conditions", "fam.json", "--n", "2"], d.path());
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("corrected: all conditions hold"));
    let c = lyat(&["crosscheck", "--samples", "30", "--seed", "7"], d.path());
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
}
