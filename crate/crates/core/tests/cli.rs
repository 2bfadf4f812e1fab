use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coarse-tw"))
        .args(args)
        .env_remove("COARSE_TW_BUDGET")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check<'a>(v: &'a Value, name: &str) -> &'a Value {
    v["payload"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check named {name}"))
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["decompose", "P8", "--algo", "simple", "-k", "0", "-r", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["decompose", "/no/such/file", "-k", "1", "-r", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn simple_decomposition_of_p8_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("p8.json");
    let td = dir.path().join("td.json");
    assert_eq!(run(&["gen", "P8", "-o", path_str(&g)]).status.code(), Some(0));
    let out = run(&[
        "decompose",
        path_str(&g),
        "--algo",
        "simple",
        "-k",
        "1",
        "-r",
        "1",
        "-o",
        path_str(&td),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&[
        "check",
        "--graph",
        path_str(&g),
        "--td",
        path_str(&td),
        "--bound",
        "simple",
        "-k",
        "1",
        "-r",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["payload"]["ok"], true);
    let size = check(&v, "cover_size");
    assert_eq!(size["bound"], "k(ceil(log2 n) + 2) = 5");
    assert!(size["observed"].as_str().unwrap().parse::<usize>().unwrap() <= 5);

    // The covers have radius 1, so a radius-2 table fails.
    let out = run(&[
        "check",
        "--graph",
        path_str(&g),
        "--td",
        path_str(&td),
        "--bound",
        "simple",
        "-k",
        "1",
        "-r",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(check(&json(&out), "radius")["holds"], false);
}

#[test]
fn round_decomposition_of_c16_keeps_its_potential() {
    let out = run(&["decompose", "C16", "--algo", "round", "-k", "2", "-r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let phi = check(&v, "potential");
    assert_eq!(phi["bound"], "4k(ceil(log2 n) + 1) = 40");
    assert!(phi["observed"].as_str().unwrap().parse::<u64>().unwrap() <= 40);
}

#[test]
fn payload_hashes_are_reproducible() {
    let cases: [&[&str]; 4] = [
        &["separator", "C16", "-k", "2", "-r", "1"],
        &["decompose", "G4x4", "--algo", "round", "-k", "2", "-r", "1"],
        &["distgraph", "P20", "-r", "2", "--sigma", "3"],
        &["pipeline", "C16", "--chain", "coarsen", "-r", "1"],
    ];
    for args in cases {
        let a = json(&run(args));
        let b = json(&run(args));
        assert_eq!(a["payload_sha256"], b["payload_sha256"], "{args:?}");
        assert_eq!(a["payload"], b["payload"]);
    }
}

#[test]
fn text_format_lists_checks() {
    let out = run(&[
        "--format",
        "text",
        "decompose",
        "P8",
        "--algo",
        "simple",
        "-k",
        "1",
        "-r",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS cover_size"));
    assert!(text.contains("payload sha256:"));
}
