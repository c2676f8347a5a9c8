use std::path::Path;
use std::process::{Command, Output};

const PATH_3: &str =
    "structure P\narity 3\ngroup sym\nelements a b c d\nrel a b c\nrel b c d\nend\n";

fn fh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fh"))
        .args(args)
        .output()
        .expect("run fh")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn delta_prints_integer() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fhs", PATH_3);
    let o = fh(&["delta", &f]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().parse::<i64>().unwrap(), 2);
    let o = fh(&["delta", &f, "--set", "a,b,c"]);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fhs", PATH_3);
    let o = fh(&["--json", "dim", &f, "--set", "b,c"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["dim"], 2);
}

#[test]
fn malformed_file_is_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.fhs", "structure X\narity 3\nrel a b\n");
    let o = fh(&["delta", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("ERROR parse:"));
}

#[test]
fn unknown_element_is_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fhs", PATH_3);
    let o = fh(&["dim", &f, "--set", "zz"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("ERROR "));
}

#[test]
fn bound_above_hard_limit_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fhs", PATH_3);
    let o = fh(&["--bound", "40", "dim", &f]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_submodularity_passes() {
    let o = fh(&["verify", "submodularity", "--seed", "7", "--count", "500"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("PASS submodularity checked=500"));
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    let o = fh(&["verify", "nosuch"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn amalgam_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let b1 = write(
        dir.path(),
        "b1.fhs",
        "structure B1\narity 3\ngroup sym\nelements a b c\nrel a b c\nend\n",
    );
    let b2 = write(
        dir.path(),
        "b2.fhs",
        "structure B2\narity 3\ngroup sym\nelements a d e\nrel a d e\nend\n",
    );
    let out = dir.path().join("d.fhs");
    let o = fh(&[
        "amalgam",
        &b1,
        &b2,
        "--over",
        "a",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fh(&["delta", out.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn exquisite_base_checks_out() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.fht");
    assert!(fh(&["exquisite", "base", "-o", q.to_str().unwrap()])
        .status
        .success());
    let o = fh(&["exquisite", "check", q.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("intertwined true"));
}

#[test]
fn generic_build_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = fh(&[
            "generic",
            "build",
            "--steps",
            "12",
            "--seed",
            "3",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(p).unwrap()
    };
    assert_eq!(run("m1.fhs"), run("m2.fhs"));
}

#[test]
fn reduct_to_full_group() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "p.fhs",
        &PATH_3.replace("group sym", "group id"),
    );
    let o = fh(&["reduct", "group", &f, "--to", "sym"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("group sym"));
    assert_eq!(text.lines().filter(|l| l.starts_with("rel ")).count(), 2);
}

#[test]
fn reduct_to_smaller_group_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.fhs", PATH_3);
    let o = fh(&["reduct", "group", &f, "--to", "id"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("ERROR not-subgroup:"));
}
