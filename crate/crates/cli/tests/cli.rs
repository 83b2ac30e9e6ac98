use std::process::{Command, Output};

use serde_json::Value;

fn altfta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_altfta"))
        .args(args)
        .env_remove("ALTFTA_SEED")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = altfta(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn report<'a>(doc: &'a Value, name: &str) -> &'a Value {
    doc["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["identity_name"] == name)
        .unwrap_or_else(|| panic!("no report {name}"))
}

#[test]
fn verify_builtins() {
    let h = json_ok(&["verify", "--algebra", "H"]);
    assert_eq!(h["matches_profile"], true);
    let fails: Vec<&Value> = h["reports"].as_array().unwrap().iter().filter(|r| r["status"] == "fails").collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0]["identity_name"], "commutative");

    let o = json_ok(&["verify", "--algebra", "O"]);
    assert_eq!(report(&o, "left_alternative")["status"], "holds_exact");
    assert_eq!(report(&o, "associative")["status"], "fails");
    assert!(report(&o, "associative")["witness"].is_array());

    let s = json_ok(&["verify", "--algebra", "S16"]);
    assert_eq!(report(&s, "left_alternative")["status"], "fails");
}

#[test]
fn right_eigenvalues_of_j() {
    let doc = json_ok(&["matrix", "right-eig", "--algebra", "H", "--matrix", "[[ [0,0,1,0] ]]", "--copy", "0,1,0,0"]);
    let pairs = doc["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 2);
    let ys: Vec<f64> = pairs.iter().map(|p| p["lambda"][1].as_f64().unwrap()).collect();
    assert!((ys[0] - 1.0).abs() < 1e-12 && (ys[1] + 1.0).abs() < 1e-12);
}

#[test]
fn octonion_witnesses() {
    let doc = json_ok(&["poly", "singular", "--algebra", "O", "--poly", "x^2+1", "--copy", "e1"]);
    let ws = doc["witnesses"].as_array().unwrap();
    assert_eq!(ws.len(), 2);
    for w in ws {
        assert_eq!(w["certified"], true);
        assert!((w["z"][1].as_f64().unwrap().abs() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn circle_norm_on_quaternions() {
    let doc = json_ok(&[
        "norm", "build", "--algebra", "H", "--spec", "l2", "--mode", "circle", "--side", "both", "--copy", "i", "--at",
        "1 + j",
    ]);
    assert!((doc["meta"]["c"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((doc["values"][0]["norm"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-6);
    assert!(doc["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn center_and_nucleus() {
    assert_eq!(json_ok(&["center", "--algebra", "O"])["center"]["dim"], 1);
    assert_eq!(json_ok(&["nucleus", "--algebra", "H"])["nucleus"]["dim"], 4);
    assert_eq!(json_ok(&["nucleus", "--algebra", "mat2r"])["nucleus"]["exact"], true);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["verify", "--algebra", "S16"][..],
        &["norm", "build", "--algebra", "O", "--spec", "linf", "--mode", "unitalized"][..],
        &["poly", "singular", "--algebra", "H", "--poly", "x^3 + j*x - 1"][..],
    ] {
        let a = altfta(args);
        let b = altfta(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_altfta"))
        .args(["verify", "--algebra", "H"])
        .env("ALTFTA_SEED", "1234")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["run"]["seed"], 1234);
    assert_eq!(report(&doc, "power_associative")["seed"], 1234);
    assert_eq!(json_ok(&["--seed", "9", "verify", "--algebra", "H"])["run"]["seed"], 9);
}

#[test]
fn exit_codes_and_error_json() {
    let usage = altfta(&["verify", "--algebra", "no-such-file.json"]);
    assert_eq!(usage.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&usage.stderr).unwrap();
    assert_eq!(err["error"], "invalid_argument");

    let parse = altfta(&["poly", "singular", "--algebra", "H", "--poly", "x^q"]);
    assert_eq!(parse.status.code(), Some(2));

    // X -> jX does not commute with left multiplication by i.
    let domain = altfta(&["matrix", "eig", "--algebra", "H", "--matrix", "[[[0,0,1,0]]]", "--copy", "i"]);
    assert_eq!(domain.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&domain.stderr).unwrap();
    assert_eq!(err["error"], "not_complex_linear");

    let hyp = altfta(&["matrix", "right-eig", "--algebra", "O", "--matrix", "[[\"1\"]]", "--copy", "e1"]);
    assert_eq!(hyp.status.code(), Some(1));

    assert_eq!(altfta(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(altfta(&["--tol", "bogus=1", "catalog"]).status.code(), Some(2));
}

#[test]
fn algebra_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    let shown = altfta(&["show", "--algebra", "H"]);
    std::fs::write(&path, &shown.stdout).unwrap();
    let p = path.to_str().unwrap();
    let again = altfta(&["show", "--algebra", p]);
    assert_eq!(shown.stdout, again.stdout);
    // The profile travels with the file.
    assert_eq!(json_ok(&["verify", "--algebra", p])["profile_checked"], true);

    let m = dir.path().join("m.json");
    std::fs::write(&m, "[[[0,0,1,0],[0,0,0,0]],[[0,0,0,0],[0,1,0,0]]]").unwrap();
    let doc = json_ok(&["matrix", "right-eig", "--algebra", p, "--matrix", m.to_str().unwrap(), "--copy", "i"]);
    let reread = serde_json::to_string(&doc["matrix"]).unwrap();
    std::fs::write(&m, &reread).unwrap();
    let doc2 = json_ok(&["matrix", "right-eig", "--algebra", p, "--matrix", m.to_str().unwrap(), "--copy", "i"]);
    assert_eq!(doc["pairs"], doc2["pairs"]);
}

#[test]
fn landscape_csv() {
    let out = altfta(&[
        "poly", "landscape", "--algebra", "C", "--poly", "x^2+1", "--copy", "i", "--region", "-1,1,-1,1", "--resolution",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 3);
    // Middle row, first column is z = -1: |(-1)^2 + 1| = 2.
    assert_eq!(rows[1].split(',').next().unwrap(), "2e0");
    let json = json_ok(&["poly", "landscape", "--algebra", "C", "--poly", "x", "--copy", "i", "--resolution", "1", "--output", "json"]);
    assert_eq!(json["landscape"]["values"].as_array().unwrap().len(), 1);
}

#[test]
fn noncommutative_search() {
    let doc = json_ok(&["poly", "singular", "--algebra", "H", "--nc", "--poly", "(+ (* x i x) 1)", "--copy", "i"]);
    assert!(doc["witnesses"].as_array().unwrap().iter().all(|w| w["certified"] == true));
    let refused = altfta(&["poly", "singular", "--algebra", "H", "--nc", "--poly", "(+ (* j x) 1)", "--copy", "i"]);
    assert_eq!(refused.status.code(), Some(1));
}

#[test]
fn catalog_and_help() {
    let cat = json_ok(&["catalog"]);
    assert_eq!(cat.as_array().unwrap().len(), 8);
    let help = altfta(&["poly", "singular", "--help"]);
    let text = String::from_utf8(help.stdout).unwrap();
    assert!(text.contains("--copy") && text.contains("--grid"));
}
