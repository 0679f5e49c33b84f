use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    Command::new(env!("CARGO_BIN_EXE_ecparity"))
        .current_dir(root)
        .env_remove("ECPARITY_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn unknown_label_exits_2() {
    let out = run(&["compare", "11a1", "9999z9", "--p", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("9999z9"));
}

#[test]
fn invalid_p_exits_2() {
    assert_eq!(
        run(&["compare", "11a1", "121c1", "--p", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["compare", "11a1", "121c1", "--p", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_reduction_at_p_exits_2() {
    assert_eq!(
        run(&["compare", "11a1", "121c1", "--p", "11"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn strict_mode_refuses_wild_places() {
    let out = run(&["compare", "4400m2", "48400ch1", "--p", "3", "--strict"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn refuted_pair_is_reported() {
    let out = run(&["compare", "11a1", "14a1", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["congruence"]["status"], "refuted_at");
    assert_eq!(r["congruence"]["ell"], 2);
    assert_eq!(r["selmer_parity"]["verdict"], "not_applicable");
}

#[test]
fn analyze_lists_bad_places() {
    let out = run(&["analyze", "4400m2", "--p", "3"]);
    assert!(out.status.success());
    let places: Vec<String> = json(&out)["places"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["place"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(places, ["2", "5", "11"]);
}

#[test]
fn quadratic_field_names() {
    let out = run(&[
        "compare",
        "11a1",
        "121c1",
        "--field",
        "Q(sqrt(-11))",
        "--p",
        "3",
    ]);
    assert!(out.status.success());
    let r = json(&out);
    assert_eq!(r["field"], "Q(sqrt{-11})");
    assert_eq!(r["infinite_places"], serde_json::json!(["inf"]));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["failures"], serde_json::json!([]));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("ecparity-cli-{}.json", std::process::id()));
    let out = run(&["selftest", "-o", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.contains("\"cases\""));
}
