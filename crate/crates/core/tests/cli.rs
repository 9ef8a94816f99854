use std::process::Command;

fn modrep(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_modrep"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn verify_passes_and_is_byte_stable() {
    let args = [
        "verify",
        "--q",
        "5,7",
        "--suites",
        "diagram,serre,alpha",
        "--seed",
        "42",
        "--format",
        "json",
    ];
    let (code, a) = modrep(&args);
    assert_eq!(code, 0, "{a}");
    let (_, b) = modrep(&args);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["seed"], 42);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] != "fail"));
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.get("wall_ms").is_none()));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(modrep(&["verify", "--q", "6"]).0, 2);
    assert_eq!(modrep(&["verify", "--q", "4", "--suites", "diagram"]).0, 2);
    assert_eq!(modrep(&["verify", "--suites", "nonsense"]).0, 2);
    assert_eq!(modrep(&["verify", "--format", "xml"]).0, 2);
    assert_eq!(modrep(&["frobnicate"]).0, 2);
}

#[test]
fn characteristic_two_fields_suite() {
    let (code, out) = modrep(&[
        "verify", "--q", "4", "--suites", "fields", "--format", "tsv",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("suite\tname\tanchor"));
}

#[test]
fn diagram_emits_matrices() {
    let (code, out) = modrep(&["diagram", "--q", "5", "--k", "3", "--s", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let mats = v["matrices"].as_object().unwrap();
    for name in ["iota", "pi", "theta_bar", "pi_bottom", "phi", "f", "psi"] {
        assert!(mats.contains_key(name), "{name}");
    }
    assert_eq!(mats["f"].as_array().unwrap().len(), 4);
}

#[test]
fn tables() {
    let (code, out) = modrep(&["table", "--q", "5", "--what", "dims", "--format", "tsv"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "3\t4\t4\t2\t2"));
    let (code, out) = modrep(&["table", "--q", "3", "--what", "chars", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["characters"].as_array().unwrap().len(), 6);
}
