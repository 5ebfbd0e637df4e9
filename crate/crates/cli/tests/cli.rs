use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dp8(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp8"))
        .args(args)
        .output()
        .expect("spawn dp8")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn generated(dir: &Path, kind: &str, extra: &[&str], seed: &str) -> String {
    let mut args = vec!["generate", "--kind", kind, "--perturb", "5", "--seed", seed];
    args.extend_from_slice(extra);
    let o = dp8(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    write(
        dir,
        &format!("{kind}-{seed}.json"),
        std::str::from_utf8(&o.stdout).unwrap(),
    )
}

#[test]
fn generate_parametrize_verify_chain() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, extra) in [
        ("p1xp1", &[][..]),
        ("blowup", &[][..]),
        ("sphere", &["--a", "-1"][..]),
        ("sphere", &["--a", "3"][..]),
    ] {
        let ideal = generated(dir.path(), kind, extra, "7");
        let map = dir.path().join(format!("{kind}-map.json"));
        let o = dp8(&[
            "parametrize",
            "--in",
            &ideal,
            "--out",
            map.to_str().unwrap(),
        ]);
        assert_eq!(
            code(&o),
            0,
            "{kind}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let out: Value = serde_json::from_str(&fs::read_to_string(&map).unwrap()).unwrap();
        assert_eq!(out["result"], "parametrization");
        let o = dp8(&["verify", "--map", map.to_str().unwrap(), "--in", &ideal]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout_json(&o)["verified"], true);
    }
}

#[test]
fn verify_rejects_a_map_for_another_surface() {
    let dir = tempfile::tempdir().unwrap();
    let a = generated(dir.path(), "p1xp1", &[], "1");
    let b = generated(dir.path(), "p1xp1", &[], "2");
    let map = dir.path().join("map.json");
    assert_eq!(
        code(&dp8(&[
            "parametrize",
            "--in",
            &a,
            "--out",
            map.to_str().unwrap()
        ])),
        0
    );
    let o = dp8(&["verify", "--map", map.to_str().unwrap(), "--in", &b]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["verified"], false);
}

#[test]
fn parametrize_reads_standard_input() {
    let dir = tempfile::tempdir().unwrap();
    let ideal = generated(dir.path(), "blowup", &[], "3");
    let o = Command::new(env!("CARGO_BIN_EXE_dp8"))
        .arg("parametrize")
        .stdin(fs::File::open(&ideal).unwrap())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["kind"], "blowup");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = dp8(&[
        "generate",
        "--kind",
        "sphere",
        "--a",
        "2",
        "--perturb",
        "10",
        "--seed",
        "42",
    ]);
    let g2 = dp8(&[
        "generate",
        "--kind",
        "sphere",
        "--a",
        "2",
        "--perturb",
        "10",
        "--seed",
        "42",
    ]);
    assert_eq!(g1.stdout, g2.stdout);
    let ideal = write(
        dir.path(),
        "s.json",
        std::str::from_utf8(&g1.stdout).unwrap(),
    );
    let p1 = dp8(&["parametrize", "--in", &ideal]);
    let p2 = dp8(&["parametrize", "--in", &ideal]);
    assert_eq!(code(&p1), 0);
    assert_eq!(p1.stdout, p2.stdout);
}

#[test]
fn a_single_quadric_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "one.json",
        r#"{"n": 8, "polys": ["x0*x1 - x2^2"]}"#,
    );
    let o = dp8(&["parametrize", "--in", &f]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["result"], "invalid");
}

#[test]
fn parse_errors_carry_a_position() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", r#"{"n": 8, "polys": ["x0*x1 - "]}"#);
    let o = dp8(&["info", "--in", &f]);
    assert_eq!(code(&o), 1);
    let reason = stdout_json(&o)["reason"].as_str().unwrap().to_string();
    assert!(reason.contains("column"), "{reason}");
    let f = write(dir.path(), "worse.json", "{\n  \"n\": 8,\n  oops\n}");
    let reason = stdout_json(&dp8(&["info", "--in", &f]))["reason"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(reason.contains("line 3"), "{reason}");
}

#[test]
fn missing_file_is_an_io_error() {
    let o = dp8(&["info", "--in", "/nonexistent/ideal.json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["stage"], "io");
}

#[test]
fn info_reports_the_classification() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, extra, dim) in [
        ("p1xp1", &[][..], 6),
        ("blowup", &[][..], 6),
        ("sphere", &["--a", "5"][..], 6),
    ] {
        let ideal = generated(dir.path(), kind, extra, "11");
        let o = dp8(&["info", "--in", &ideal]);
        assert_eq!(code(&o), 0);
        let v = stdout_json(&o);
        assert_eq!(v["classification"], kind);
        assert_eq!(v["lie_dim"].as_u64().unwrap(), dim + 1);
        assert_eq!(v["semisimple"], kind != "blowup");
    }
}

#[test]
fn generate_validates_its_arguments() {
    assert_eq!(
        code(&dp8(&[
            "generate",
            "--kind",
            "sphere",
            "--a",
            "4",
            "--perturb",
            "1",
            "--seed",
            "0"
        ])),
        1
    );
    assert_eq!(
        code(&dp8(&[
            "generate",
            "--kind",
            "p1xp1",
            "--a",
            "3",
            "--perturb",
            "1",
            "--seed",
            "0"
        ])),
        1
    );
    let o = dp8(&[
        "generate",
        "--kind",
        "sphere",
        "--a",
        "12",
        "--perturb",
        "1",
        "--seed",
        "0",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["a"], 3);
}

#[test]
fn conic_subcommand_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sum = r#"[[1,0,0],[0,1,0],[0,0,1]]"#;
    let f = write(dir.path(), "q.json", &format!(r#"{{"form": {sum}}}"#));
    let o = dp8(&["conic", "--in", &f]);
    assert_eq!(code(&o), 2);
    let v = stdout_json(&o);
    assert_eq!(v["verified"], true);
    assert_eq!(v["certificate"]["obstruction"]["place"], "real");

    let f = write(
        dir.path(),
        "k.json",
        &format!(r#"{{"form": {sum}, "a": -1}}"#),
    );
    let o = dp8(&["conic", "--in", &f]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["verified"], true);

    let f = write(
        dir.path(),
        "k2.json",
        &format!(r#"{{"form": {sum}, "a": 2}}"#),
    );
    let o = dp8(&["conic", "--in", &f]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout_json(&o)["verified"], true);

    let f = write(
        dir.path(),
        "iso.json",
        r#"{"form": [[1,0,0],[0,1,0],[0,0,-2]]}"#,
    );
    assert_eq!(code(&dp8(&["conic", "--in", &f])), 0);
}
