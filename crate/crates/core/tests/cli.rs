use std::process::{Command, Output};

fn sturmlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sturmlab"))
        .args(args)
        .env_remove("STURMLAB_MAX_PREFIX")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn generate_fibonacci() {
    let o = sturmlab(&["generate", "fibonacci", "-n", "11"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "abaababaaba\n");
}

#[test]
fn color_justification() {
    let o = sturmlab(&["color", "fibonacci", "ab"]);
    assert_eq!(stdout(&o), "2 (prefix, rich in b, witness aa)\n");
    let o = sturmlab(&["color", "fibonacci", "bb"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn search_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = sturmlab(&[
        "search",
        "fibonacci",
        "--scheme",
        "sturmian3",
        "--color",
        "1",
        "--max-len",
        "2000",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["version"], "sturmlab-search/1");
    assert_eq!(v["scheme"], "STURMIAN_3");
    assert_eq!(v["total_nodes"], 53335);
    assert_eq!(v["truncated"], 0);
    assert_eq!(
        v["deepest"],
        serde_json::json!([987, 377, 144, 55, 21, 8, 3, 1])
    );

    // byte-for-byte stable
    let again = sturmlab(&["search", "fibonacci", "--color", "1"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn periodic_word_is_inconclusive() {
    let o = sturmlab(&[
        "search",
        "literal:(ab)*",
        "--force",
        "--color",
        "2",
        "--max-len",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["demonstration"]["factorization"], "(ab)^ω");
}

#[test]
fn exit_codes() {
    assert_eq!(sturmlab(&[]).status.code(), Some(64));
    assert_eq!(sturmlab(&["generate"]).status.code(), Some(64));
    assert_eq!(
        sturmlab(&["search", "fibonacci", "--scheme", "rainbow"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        sturmlab(&["generate", "sturmian:d=0"]).status.code(),
        Some(1)
    );
}

#[test]
fn prefix_bound_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_sturmlab"))
        .args(["generate", "fibonacci", "-n", "500"])
        .env("STURMLAB_MAX_PREFIX", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("resource bound of 100"), "{err}");
}

#[test]
fn verify_all_tribonacci() {
    let o = sturmlab(&[
        "verify-all",
        "tribonacci",
        "--m-max",
        "30",
        "--max-len",
        "500",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["verification"]["reports"].as_array().unwrap().len(), 4);
}

#[test]
fn desub_and_descend() {
    let o = sturmlab(&["desub", "R_a", "aabaababaab", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["decoded"], "aababba");
    assert_eq!(v["certificate"]["tail"], "b");
    assert_eq!(
        v["certificate"]["boundaries"],
        serde_json::json!([0, 1, 2, 4, 5, 7, 9, 10])
    );
    let o = sturmlab(&[
        "descend",
        "fibonacci",
        "--color",
        "2",
        "--max-len",
        "300",
        "--json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["end"], "exhausted");
}
