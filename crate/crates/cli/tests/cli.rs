use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const GAUSS13: &str = r#""p": [13, -4, 1], "q": [5, -4, 1], "u0": "1""#;

fn hgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgeom"))
        .args(args)
        .env_remove("HGDECIDE_SCAN_CAP")
        .env_remove("HGDECIDE_PRECISION_CAP")
        .output()
        .expect("binary runs")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn instance(dir: &TempDir, name: &str, body: &str, t: &str, problem: &str) -> PathBuf {
    file(
        dir,
        name,
        &format!(r#"{{{body}, "t": "{t}", "problem": "{problem}"}}"#),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn gauss13_decisions_and_certificates() {
    let dir = TempDir::new().unwrap();
    let m = instance(&dir, "m.json", GAUSS13, "1/13", "membership");
    let cert = dir.path().join("m.cert.json");
    let o = hgeom(&["decide", s(&m), "--out", s(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("Member(2)"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["verdict"]["witness"], 2);
    let o = hgeom(&["verify", s(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let t = instance(&dir, "t.json", GAUSS13, "1/26", "threshold");
    let o = hgeom(&["decide", s(&t)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["witness"], 3);
    assert_eq!(v["verdict"]["outcome"], "fails");
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let m = instance(&dir, "m.json", GAUSS13, "1/7", "membership");
    let o = hgeom(&["decide", s(&m)]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o).replace("\"t\": \"1/7\"", "\"t\": \"1/13\"");
    let cert = file(&dir, "bad.cert.json", &text);
    let o = hgeom(&["verify", s(&cert)]);
    assert_eq!(o.status.code(), Some(5), "{}", stdout(&o));
    assert!(stderr(&o).contains("invalid certificate"));
}

#[test]
fn real_quadratic_routes_through_the_conditional_path() {
    let dir = TempDir::new().unwrap();
    let body = r#""p": [-1, -2, 1], "q": [-4, -2, 1], "u0": "1""#;
    let f = instance(&dir, "rq.json", body, "-1/2", "membership");
    let o = hgeom(&["decide", s(&f)]);
    assert!(
        matches!(o.status.code(), Some(10) | Some(11)),
        "{:?} {}",
        o.status,
        stderr(&o)
    );
    assert!(stderr(&o).contains("conditional on Schanuel"));
    let cert = file(&dir, "rq.cert.json", &stdout(&o));
    assert_eq!(hgeom(&["verify", s(&cert)]).status.code(), Some(0));
    let o = hgeom(&["decide", s(&f), "--mode", "unconditional"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn eval_oracle_canon() {
    let dir = TempDir::new().unwrap();
    let m = instance(&dir, "m.json", GAUSS13, "1/13", "membership");
    let o = hgeom(&["eval", s(&m), "--terms", "4"]);
    assert_eq!(stdout(&o), "u_0 = 1\nu_1 = 5/13\nu_2 = 1/13\nu_3 = 1/117\n");
    let o = hgeom(&["oracle", s(&m), "--upto", "100"]);
    assert_eq!(stdout(&o).trim(), "FoundMembership(2)");
    let o = hgeom(&["canon", s(&m)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("theta = 1/39"), "{out}");
    assert!(out.contains("4.77937282433493"), "{out}");
}

#[test]
fn recognize_reports_matchings() {
    let dir = TempDir::new().unwrap();
    let phi18 = file(&dir, "phi18.json", "[1, 0, 0, -1, 0, 0, 1]");
    let o = hgeom(&["recognize", s(&phi18)]);
    assert!(
        stdout(&o).contains("Assumption 1: NO (max matching size 0 of 6 vertices)"),
        "{}",
        stdout(&o)
    );
    let f = file(&dir, "f.json", r#"{"poly": [13, -4, 1]}"#);
    let o = hgeom(&["recognize", s(&f)]);
    assert!(stdout(&o).contains("Assumption 1: YES"));
    assert!(stdout(&o).contains("class C: rho = 2, g(y) = y + 9"));
}

#[test]
fn corpus_files_are_decided() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("corpus");
    let o = hgeom(&[
        "corpus",
        "--seed",
        "7",
        "--count",
        "10",
        "--family",
        "quadratic-imaginary",
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let files: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(files.len(), 10);
    for f in &files {
        let o = hgeom(&["decide", f]);
        assert!(
            matches!(o.status.code(), Some(0 | 1 | 10 | 11)),
            "{f}: {}",
            stderr(&o)
        );
    }
    let again = dir.path().join("again");
    hgeom(&[
        "corpus",
        "--seed",
        "7",
        "--count",
        "10",
        "--family",
        "quadratic-imaginary",
        "--out",
        s(&again),
    ]);
    for f in &files {
        let name = Path::new(f).file_name().unwrap();
        assert_eq!(fs::read(f).unwrap(), fs::read(again.join(name)).unwrap());
    }
}

#[test]
fn exit_codes_for_bad_input_and_caps() {
    let dir = TempDir::new().unwrap();
    let bad = file(
        &dir,
        "bad.json",
        r#"{"p": [1, 2.5], "q": [1], "u0": "1", "t": "1", "problem": "membership"}"#,
    );
    let o = hgeom(&["decide", s(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("$.p[1]"), "{}", stderr(&o));
    assert_eq!(hgeom(&["decide", "--bogus"]).status.code(), Some(3));

    let m = instance(&dir, "m.json", GAUSS13, "1/13", "membership");
    let o = Command::new(env!("CARGO_BIN_EXE_hgeom"))
        .args(["eval", s(&m), "--terms", "10"])
        .env("HGDECIDE_SCAN_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let o = Command::new(env!("CARGO_BIN_EXE_hgeom"))
        .args(["eval", s(&m), "--terms", "10", "--scan-cap", "100"])
        .env("HGDECIDE_SCAN_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
