use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn laplaza(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laplaza"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const SWAP: &str =
    r#"[{"position":[],"before":"(plus x1 x2)","after":"(plus x2 x1)","pieces":["x1","x1"]}]"#;

#[test]
fn square_is_outside_the_semiring_laplaza_set() {
    let out = laplaza(&[
        "laplaza-check",
        "--sig",
        "csr",
        "--laplaza",
        "laplaza-semiring",
        "(times x1 x1)",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["member"], false);
    let out = laplaza(&[
        "laplaza-check",
        "--sig",
        "csr",
        "--laplaza",
        "laplaza-semiring",
        "(plus (times x1 x2) x3)",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn gould_reports_the_discrepancy() {
    let out = laplaza(&["gould"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["forced"], true);
    assert_eq!(v["model_is_transposition"], true);
    assert_eq!(v["model_value"], serde_json::json!([2, 1]));
}

#[test]
fn quick_selftest_passes() {
    let out = laplaza(&["selftest", "--quick"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = json(&out);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 8);
}

#[test]
fn malformed_input_exits_three() {
    for args in [
        &["normalize", "--sig", "cmon", "(plus x1"][..],
        &["normalize", "--sig", "/nonexistent/sig", "x1"],
        &[
            "laplaza-check",
            "--sig",
            "csr",
            "--laplaza",
            "operadic",
            "x1",
        ],
        &[
            "coherence-exists",
            "--sig",
            "cmon",
            "--laplaza",
            "full",
            "--depth",
            "0",
            "x1",
            "x1",
        ],
        &["two-equal", "(slot 1 [x1] [x2])", "(slot 1 [x2] [x1])"],
        &["strictify", "--fixture", "missing"],
        &["no-such-command"],
    ] {
        let out = laplaza(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(laplaza(&["--help"]).status.code(), Some(0));
    assert_eq!(laplaza(&["glue", "--help"]).status.code(), Some(0));
}

#[test]
fn coherence_exists_reports_found_and_absent() {
    let found = laplaza(&[
        "coherence-exists",
        "--sig",
        "cmon",
        "--laplaza",
        "operadic",
        "(plus x1 (plus x2 x3))",
        "(plus (plus x3 x1) x2)",
    ]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(json(&found)["path"]["target"], "(plus (plus x3 x1) x2)");
    let absent = laplaza(&[
        "coherence-exists",
        "--sig",
        "cmon",
        "--laplaza",
        "operadic",
        "(plus x1 x2)",
        "(plus x1 x3)",
    ]);
    assert_eq!(absent.status.code(), Some(1));
    assert_eq!(json(&absent)["verdict"], "absent");
}

#[test]
fn certificates_replay_and_tampering_is_caught() {
    let left = scratch("swap.json", SWAP);
    let out = laplaza(&[
        "coherence-equal",
        "--sig",
        "cmon",
        "--laplaza",
        "full",
        "(plus x1 x1)",
        "--left",
        left.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "forced-equal");
    let cert = scratch("cert.json", std::str::from_utf8(&out.stdout).unwrap());
    let replay = laplaza(&["coherence-equal", "--replay", cert.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(0));
    assert_eq!(json(&replay)["verdict"], "replayed");

    let mut v = json(&out);
    v["certificate"]["derivation"] = serde_json::json!([]);
    let bad = scratch("bad.json", &v.to_string());
    let replay = laplaza(&["coherence-equal", "--replay", bad.to_str().unwrap()]);
    assert_eq!(replay.status.code(), Some(1));
    assert_eq!(json(&replay)["verdict"], "rejected");
}

#[test]
fn semiring_swap_of_a_square_is_model_distinct() {
    let left = scratch(
        "square.json",
        r#"[{"position":[],"before":"(times x1 x2)","after":"(times x2 x1)","pieces":["x1","x1"]}]"#,
    );
    let out = laplaza(&[
        "coherence-equal",
        "--sig",
        "csr",
        "--laplaza",
        "laplaza-semiring",
        "(times x1 x1)",
        "--left",
        left.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "model-distinct");
    assert!(v["model_witness"].is_object());
}

#[test]
fn model_eval_tracks_strands() {
    let path = scratch("eval.json", SWAP);
    let out = laplaza(&[
        "model-eval",
        "--sig",
        "cmon",
        "--laplaza",
        "full",
        "--path",
        path.to_str().unwrap(),
        "(plus x1 x1)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], serde_json::json!([2, 1]));
    assert_eq!(v["is_identity"], false);
}

#[test]
fn strictify_accepts_coherent_and_rejects_incoherent_fixtures() {
    let ok = laplaza(&["strictify", "--fixture", "z2-automorphisms"]);
    assert_eq!(ok.status.code(), Some(0));
    let v = json(&ok);
    assert_eq!(v["report"]["verify_strict"]["ok"], true);
    assert_eq!(v["report"]["verify_equivalence"]["ok"], true);
    for bad in ["super-lines", "broken-pentagon"] {
        let out = laplaza(&["strictify", "--fixture", bad]);
        assert_eq!(out.status.code(), Some(1), "{bad}");
        assert_eq!(json(&out)["coherent"], false);
    }
    let junk = scratch("junk.json", "{\"objects\": 3}");
    assert_eq!(
        laplaza(&["strictify", junk.to_str().unwrap()])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn glue_closes_a_cylinder_into_a_torus() {
    let ws = scratch(
        "cyl.json",
        r#"{"inbound":["a"],"outbound":["a"],"components":[{"in":["a"],"out":["a"],"genus":0}]}"#,
    );
    let out = laplaza(&["glue", ws.to_str().unwrap(), "--labels", "a"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total_genus"], 1);
    assert_eq!(v["result"]["components"][0]["genus"], 1);
}

#[test]
fn two_equal_exit_codes() {
    let eq = laplaza(&[
        "two-equal",
        "--oracle-depth",
        "3",
        "(plus (slot 1 [x1] [x2]) (slot 2 [x2] [x1]))",
        "(plus (slot 2 [x2] [x1]) (slot 1 [x1] [x2]))",
    ]);
    assert_eq!(eq.status.code(), Some(0));
    assert_eq!(json(&eq)["oracle"], true);
    let ne = laplaza(&[
        "two-equal",
        "(check (plus (slot 1 [x1] [x1]) (slot 2 [x1] [x1])) [x1])",
        "(plus (slot 1 [x1] [x1]) (slot 2 [x1] [x1]))",
    ]);
    assert_eq!(ne.status.code(), Some(1));
}

#[test]
fn every_subcommand_has_a_schema() {
    let out = laplaza(&["schema"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for c in laplaza_cli::schema::COMMANDS {
        assert!(v[c].is_object(), "{c}");
        assert_eq!(laplaza(&[c, "--help"]).status.code(), Some(0), "{c}");
    }
}

#[test]
fn text_format_prints_key_value_lines() {
    let out = laplaza(&[
        "--format",
        "text",
        "normalize",
        "--sig",
        "cmon",
        "(plus x2 (plus x1 x2))",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("normal_form: ")));
}
