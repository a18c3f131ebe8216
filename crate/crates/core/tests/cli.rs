use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_commutator"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_tmp(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join("commutator-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn status_accepts_token_and_compact_spellings() {
    for args in [
        vec!["status", "su", "1", "2"],
        vec!["status", "su(1,2)"],
        vec!["status", "su(2,1)"],
    ] {
        let out = run(&args);
        assert!(out.status.success(), "{args:?}: {}", stderr(&out));
        assert!(stdout(&out).contains("open case"), "{args:?}: {}", stdout(&out));
    }
    let out = run(&["status", "sl", "2", "H"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("surjective"));
    let out = run(&["status", "sl2r"]);
    assert!(stdout(&out).contains("surjective: split or compact form"));
}

#[test]
fn status_json_is_structured() {
    let out = run(&["status", "so(3,5)", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "Open");
    assert_eq!(v["arrow_count"], 1);
}

#[test]
fn unknown_algebra_exits_2_with_suggestions() {
    let out = run(&["status", "xq(1,2)"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("nearest"), "{err}");
    assert!(err.contains("sl("), "{err}");
}

#[test]
fn inspect_reports_structure_dims() {
    let out = run(&["inspect", "su(1,2)", "--json"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["dim"], 8);
    assert_eq!(v["k_dim"], 4);
    assert_eq!(v["a_dim"], 1);
    assert_eq!(v["m_dim"], 1);
    assert_eq!(v["arrow_count"], 1);
    assert_eq!(v["verdict"], "Open");
}

#[test]
fn catalog_filter_narrows_output() {
    let out = run(&["catalog", "--filter", "u*", "--max-size", "6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("u*(3,H)"), "{text}");
    assert!(!text.contains("sl(2,R)"), "{text}");
}

#[test]
fn decompose_zero_input_yields_zero_witness() {
    let zero = write_tmp("zero_sl2.json", "[[0,0],[0,0]]");
    let out = run(&["decompose", "--algebra", "sl2r", "--input", zero.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let w: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(w["algebra"], "sl(2,R)");
    let y: Vec<f64> = serde_json::from_value(w["y"]["data"].clone()).unwrap();
    assert!(y.iter().all(|v| v.abs() < 1e-12));
    assert_eq!(w["residual"], 0.0);
}

#[test]
fn decompose_then_verify_roundtrip() {
    let z = write_tmp("z_sl3.json", "[[0.4, 1.2, -0.3], [0.7, -0.9, 0.2], [-1.1, 0.5, 0.5]]");
    let witness_path = std::env::temp_dir().join("commutator-cli-tests/w_sl3.json");
    let out = run(&[
        "decompose",
        "--algebra",
        "sl(3,R)",
        "--input",
        z.to_str().unwrap(),
        "--output",
        witness_path.to_str().unwrap(),
        "--seed",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = run(&["verify", witness_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("valid witness"));

    // Tampering must be caught.
    let mut w: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&witness_path).unwrap()).unwrap();
    w["y"]["data"][0] = serde_json::json!(w["y"]["data"][0].as_f64().unwrap() + 1e-3);
    let bad = write_tmp("w_sl3_bad.json", &serde_json::to_string(&w).unwrap());
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn decompose_is_deterministic_for_fixed_seed() {
    let z = write_tmp("z_det.json", "[[0.2, -0.6], [1.0, -0.2]]");
    let args = ["decompose", "--algebra", "sl(2,R)", "--input", z.to_str().unwrap(), "--seed", "5"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "same argv and seed must give identical bytes");
    let c = bin().args(["decompose", "--algebra", "sl(2,R)", "--input"])
        .arg(z.to_str().unwrap())
        .env("COMMUTATOR_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout, "env seed must match the flag");
}

#[test]
fn decompose_reads_algebra_from_file_header() {
    let labeled = write_tmp(
        "z_labeled.json",
        r#"{"algebra": "sl(2,R)", "rows": 2, "cols": 2, "data": [0.1, 0.8, -0.5, -0.1]}"#,
    );
    let out = run(&["decompose", "--input", labeled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let w: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(w["algebra"], "sl(2,R)");
}

#[test]
fn decompose_open_case_exits_2() {
    // A generic element of su(1,2) has a component along the obstruction.
    // Build one from the k-center direction: i*diag(2,-1,-1) realified.
    let m = [
        [0.0, 2.0, 0.0, 0.0, 0.0, 0.0],
        [-2.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ];
    let text = serde_json::to_string(&m).unwrap();
    let path = write_tmp("z_su12_center.json", &text);
    let out = run(&["decompose", "--algebra", "su(1,2)", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{} {}", stdout(&out), stderr(&out));
    assert!(stderr(&out).contains("open case") || stderr(&out).contains("obstruction"), "{}", stderr(&out));
}

#[test]
fn decompose_rejects_malformed_input() {
    let bad = write_tmp("z_bad.json", "[[0, 1], [2]]");
    let out = run(&["decompose", "--algebra", "sl(2,R)", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = Path::new("/nonexistent/z.json");
    let out = run(&["decompose", "--algebra", "sl(2,R)", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_garbage_json() {
    let bad = write_tmp("not_witness.json", r#"{"hello": 3}"#);
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_family_filter_and_trials() {
    let out = run(&[
        "selftest",
        "--trials",
        "2",
        "--families",
        "sl",
        "su",
        "--seed",
        "3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passed"], true);
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 8);
    // so(2,3) is filtered out of the convexity suite; su(1,2) stays.
    let convexity = criteria.iter().find(|c| c["name"] == "projection-convexity").unwrap();
    assert_eq!(convexity["trials"], 4);
}
