use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn examples() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn spinlift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlift"))
        .args(args)
        .env_remove("SPINLIFT_BOUND")
        .current_dir(examples())
        .output()
        .expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = spinlift(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn pi1_of_pgl2() {
    let r = report(&["pi1", "--input", "pgl2.json"]);
    assert_eq!(r["invariant_factors"], serde_json::json!([2]));
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(r["seed"], 0);
}

#[test]
fn spin_of_the_tautological_pgl2_multiset() {
    let r = report(&["spin", "--input", "pgl2_taut.json"]);
    assert_eq!(r["lifts"], false);
    assert_eq!(r["spin_character"], serde_json::json!([1]));
    assert_eq!(r["involution"], serde_json::json!([1]));
}

#[test]
fn keylemma_seed_7() {
    let r = report(&["keylemma", "--seed", "7", "--bound", "32", "--trials", "50"]);
    assert_eq!(r["passed"], 50);
    assert_eq!(r["failed"], 0);
    assert_eq!(r["seed"], 7);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["keylemma", "--seed", "11", "--trials", "5"];
    let (a, b) = (spinlift(&args), spinlift(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let sw = ["sw", "--input", "rep_c4_rotation.json"];
    assert_eq!(spinlift(&sw).stdout, spinlift(&sw).stdout);
}

#[test]
fn every_example_runs() {
    let cases = [
        ("pi1", "sp4_explicit.json"),
        ("involution", "sl2_adjoint.json"),
        ("spin", "so7_orbit.json"),
        ("h2", "h2_klein.json"),
        ("h2", "h2_c4_sign.json"),
        ("extension", "cocycle_c2.json"),
        ("extension", "extension_d4_center.json"),
        ("sw", "rep_catalog_sum.json"),
        ("sw", "rep_s3_a2.json"),
    ];
    for (cmd, file) in cases {
        let out = spinlift(&[cmd, "--input", file, "--format", "text"]);
        assert_eq!(out.status.code(), Some(0), "{cmd} {file}: {}", stderr(&out));
    }
    assert_eq!(report(&["h2", "--input", "h2_klein.json"])["order"], 8);
    assert_eq!(
        report(&["extension", "--input", "cocycle_c2.json"])["identified_as"],
        "C4"
    );
    let sw = report(&["sw", "--input", "rep_c4_rotation.json"]);
    assert_eq!(sw["w2_nontrivial"], true);
    assert_eq!(sw["pin_extension"]["identified_as"], "C8");
}

#[test]
fn bound_zero_is_a_validation_failure() {
    for args in [
        vec!["keylemma", "--bound", "0"],
        vec!["selftest", "--bound", "0"],
        vec!["pi1", "--input", "pgl2.json", "--bound", "0"],
        vec!["h2", "--input", "h2_klein.json", "--bound", "0"],
    ] {
        let out = spinlift(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(
            stderr(&out).contains("SizeBoundExceeded"),
            "{args:?}: {}",
            stderr(&out)
        );
    }
}

#[test]
fn environment_bound_replaces_the_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_spinlift"))
        .args(["h2", "--input", "h2_klein.json"])
        .env("SPINLIFT_BOUND", "2")
        .current_dir(examples())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("SizeBoundExceeded"));
    let out = Command::new(env!("CARGO_BIN_EXE_spinlift"))
        .args(["h2", "--input", "h2_klein.json", "--bound", "4"])
        .env("SPINLIFT_BOUND", "2")
        .current_dir(examples())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_and_schema_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"datum\": \"PGL2\",\n  \"x\"\n").unwrap();
    let out = spinlift(&["pi1", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(
        msg.contains("bad.json:") && msg.contains("parse error"),
        "{msg}"
    );

    std::fs::write(&bad, "{\n  \"datum\": 5\n}\n").unwrap();
    let out = spinlift(&["pi1", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("bad.json:3:1: schema error"),
        "{}",
        stderr(&out)
    );

    std::fs::write(&bad, r#"{"datum": {"rank": 1, "roots": [[1], [-1]], "coroots": [[1], [-1]], "simple_indices": [0]}}"#).unwrap();
    let out = spinlift(&["pi1", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not 2"), "{}", stderr(&out));
}

#[test]
fn missing_input_and_unknown_names() {
    assert_eq!(spinlift(&["pi1"]).status.code(), Some(2));
    assert_eq!(
        spinlift(&["pi1", "--input", "no-such-file.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(spinlift(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    std::fs::write(&f, r#"{"group": "C1000000", "coefficients": [2]}"#).unwrap();
    let out = spinlift(&["h2", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn output_file_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = spinlift(&[
        "pi1",
        "--input",
        "pgl2.json",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["command"], "pi1");
    let text = spinlift(&["pi1", "--input", "pgl2.json", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("invariant_factors: [2]"));
}

#[test]
fn corrupted_catalog_entry_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("catalog.json");
    let mut extra: Value = serde_json::from_str(
        &std::fs::read_to_string(examples().join("catalog_extra.json")).unwrap(),
    )
    .unwrap();
    extra["root_data"]["B2-copy"]["coroots"][1] = serde_json::json!([0, 3]);
    extra["reps"]["C2:broken"] = serde_json::json!({
        "group": {"table": [[0, 1], [1, 0]]},
        "gram": [[1]],
        "images": [[[1]], [[2]]]
    });
    std::fs::write(&f, extra.to_string()).unwrap();
    let out = spinlift(&["selftest", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("catalog entry `B2-copy`"),
        "{}",
        stderr(&out)
    );

    extra["root_data"] = serde_json::json!({});
    std::fs::write(&f, extra.to_string()).unwrap();
    let out = spinlift(&["selftest", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("catalog entry `C2:broken`"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn selftest_passes_on_the_built_in_catalogs() {
    let out = spinlift(&["selftest", "--input", "catalog_extra.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["passed_count"], 8);
    assert!(r.get("_lines").is_none());
}
