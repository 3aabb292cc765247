use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_jetwitt"))
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

fn run(args: &[&str], cache: &Path) -> Output {
    bin()
        .args(args)
        .arg("--cache")
        .arg(cache)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

/// Reads a dumped polynomial back into `{monomial -> coefficient}` with
/// monomials spelled as `X0^a*Y0^b...`.
fn poly_terms(p: &Value) -> Vec<(String, i64)> {
    let vars: Vec<String> = p["vars"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v[0].as_str().unwrap().to_string())
        .collect();
    let mut out: Vec<(String, i64)> = p["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let mono: Vec<String> = t[0]
                .as_array()
                .unwrap()
                .iter()
                .zip(&vars)
                .filter(|(e, _)| e.as_u64().unwrap() > 0)
                .map(|(e, v)| format!("{v}^{e}"))
                .collect();
            (mono.join("*"), t[1][0].as_i64().unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn z2_level_one_table_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["witt-table", "--triple", "Z2", "--level", "1"], dir.path());
    assert_eq!(code(&out), 0);
    let golden = std::fs::read(here("golden/witt_table_z2_n1.json")).unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&golden));

    // S_1 = X_1 + Y_1 - X_0 Y_0
    let v = stdout_json(&out);
    let expected = vec![
        ("X0^1*Y0^1".to_string(), -1),
        ("X1^1".to_string(), 1),
        ("Y1^1".to_string(), 1),
    ];
    assert_eq!(poly_terms(&v["sum"][1]), expected);
}

#[test]
fn level_zero_tables_are_the_ring_laws_of_o() {
    let dir = tempfile::tempdir().unwrap();
    let v = stdout_json(&run(&["witt-table", "--triple", "Z3", "--level", "0"], dir.path()));
    assert_eq!(poly_terms(&v["sum"][0]), vec![("X0^1".into(), 1), ("Y0^1".into(), 1)]);
    assert_eq!(poly_terms(&v["prod"][0]), vec![("X0^1*Y0^1".into(), 1)]);
    assert_eq!(poly_terms(&v["neg"][0]), vec![("X0^1".into(), -1)]);
    assert!(v["frob"].as_array().unwrap().is_empty());
}

#[test]
fn cache_round_trip_reverifies_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["witt-table", "--triple", "GAUSS", "--level", "1"];
    let first = run(&args, dir.path());
    assert_eq!(code(&first), 0);
    let files: Vec<_> = std::fs::read_dir(dir.path().join("witt")).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    assert_eq!(path.extension().unwrap(), "json");

    let second = run(&args, dir.path());
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout, "reload must be byte-identical");

    let mut v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    v["prod"][1] = v["prod"][0].clone();
    std::fs::write(&path, v.to_string()).unwrap();
    let tampered = run(&args, dir.path());
    assert_ne!(code(&tampered), 0);

    let mut trusting: Vec<&str> = args.to_vec();
    trusting.push("--trust-cache");
    assert_eq!(code(&run(&trusting, dir.path())), 0);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify", "--suite", "witt-axioms", "--triples", "Z2", "--rings", "F2,F4", "--levels", "2", "--samples", "50",
        "--seed", "9",
    ];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout_json(&a)["seed"], 9);
}

#[test]
fn feasibility_cap_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["witt-table", "--triple", "Z3", "--level", "4"], dir.path());
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["witt-table", "--triple", "Z2", "--level", "2", "--cap", "2"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["witt-table", "--triple", r#"{"g":[0,1],"pi":[4],"q":4}"#],
        vec!["witt-table", "--triple", "NOPE"],
        vec!["verify", "--suite", "nonsense"],
        vec!["verify", "--suite", "adjunction", "--rings", ""],
        vec!["verify", "--suite", "adjunction", "--levels", ","],
        vec!["frobnicate"],
        vec!["witt-op", "add", "--ring", "F2", "--x", "[1]"],
    ];
    for args in cases {
        let out = run(&args, dir.path());
        assert_eq!(code(&out), 4, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn adjunction_suite_passes_on_default_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["verify", "--suite", "adjunction"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    // 4 algebras x 4 rings x 3 levels, plus 16 universal-property cells and
    // the truncated-base cells.
    assert!(v["parts"].as_array().unwrap().len() >= 64);
}

#[test]
fn corrupted_s1_fixture_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = here("fixtures/corrupted_s1_z2_n1.json");
    let out = run(
        &[
            "verify", "--suite", "witt-axioms", "--triples", "Z2", "--rings", "F2", "--levels", "1", "--table",
            fixture.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], false);
    assert!(v["counterexample"]["counterexample"]["axiom"].is_string());

    // The same table loaded through the cache is refused outright.
    let good = run(&["witt-table", "--triple", "Z2", "--level", "1"], dir.path());
    assert_eq!(code(&good), 0);
    let cached = std::fs::read_dir(dir.path().join("witt")).unwrap().next().unwrap().unwrap().path();
    std::fs::copy(&fixture, &cached).unwrap();
    let refused = run(&["witt-table", "--triple", "Z2", "--level", "1"], dir.path());
    assert_ne!(code(&refused), 0);
}

#[test]
fn every_suite_runs_from_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["witt-axioms", "operators", "pderiv", "localization", "greenberg"] {
        let out = run(&["verify", "--suite", suite, "--samples", "300", "--format", "text"], dir.path());
        let text = String::from_utf8_lossy(&out.stdout);
        assert_eq!(code(&out), 0, "{suite}: {text}");
        assert!(text.starts_with(&format!("PASS {suite}")), "{text}");
    }
}

#[test]
fn jet_present_examples() {
    let dir = tempfile::tempdir().unwrap();
    let line = here("fixtures/affine_line.json");
    let sq = here("fixtures/square_zero.json");

    let free = stdout_json(&run(&["jet", "present", "--algebra", line.to_str().unwrap(), "--level", "2"], dir.path()));
    assert_eq!(free["generators"].as_array().unwrap().len(), 3);
    assert!(free["relations"].as_array().unwrap().is_empty());
    assert_eq!(free["level"], 2);

    let j1 = stdout_json(&run(&["jet", "present", "--algebra", sq.to_str().unwrap(), "--level", "1"], dir.path()));
    let rels = j1["relations"].as_array().unwrap();
    assert_eq!(rels.len(), 2);
    // delta(x^2) = 2 x^2 x' + 2 x'^2 ... its coefficients are all even
    // except that of x'^2 which is -2 + ... ; just check the variables.
    let vars: Vec<&str> = rels[1]["vars"].as_array().unwrap().iter().map(|v| v[0].as_str().unwrap()).collect();
    assert_eq!(vars, ["x", "x"]);

    let j0 = stdout_json(&run(&["jet", "present", "--algebra", sq.to_str().unwrap(), "--level", "0"], dir.path()));
    let input: Value = serde_json::from_slice(&std::fs::read(&sq).unwrap()).unwrap();
    assert_eq!(j0["generators"], serde_json::json!([["x", 0, 0]]));
    assert_eq!(j0["relations"].as_array().unwrap().len(), input["relations"].as_array().unwrap().len());
}

#[test]
fn adjoint_and_localize_checks() {
    let dir = tempfile::tempdir().unwrap();
    let sq = here("fixtures/square_zero.json");
    let line = here("fixtures/affine_line.json");
    for sub in [vec!["adjoint-check"], vec!["jet", "adjoint-check"]] {
        let mut args = sub.clone();
        args.extend(["--algebra", sq.to_str().unwrap(), "--ring", "Z4", "--level", "2"]);
        let out = run(&args, dir.path());
        assert_eq!(code(&out), 0);
        let v = stdout_json(&out);
        assert_eq!(v["details"]["witt_side"], v["details"]["jet_side"]);
    }
    let trunc = run(
        &["adjoint-check", "--algebra", sq.to_str().unwrap(), "--ring", "Z4", "--level", "1", "--base", "truncated:3"],
        dir.path(),
    );
    assert_eq!(code(&trunc), 0, "{}", String::from_utf8_lossy(&trunc.stderr));

    let out = run(&["localize-check", "--algebra", line.to_str().unwrap(), "--s", "x", "--ring", "F3"], dir.path());
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    // Over F3 the element t = x phi(x) = x (x^2 + 2x') must be a unit:
    // x in {1, 2} and x' != 1, so 2 * 2 points.
    assert_eq!(v["details"]["localized_jets"], 4);
    assert_eq!(v["details"]["jets_of_localization"], 4);
}

#[test]
fn greenberg_commands() {
    let dir = tempfile::tempdir().unwrap();
    let line = here("fixtures/affine_line.json");
    let gauss = here("fixtures/gauss_square_zero.json");

    let gr = stdout_json(&run(&["greenberg", "transform", "--algebra", line.to_str().unwrap(), "--level", "3"], dir.path()));
    assert_eq!(gr["generators"].as_array().unwrap().len(), 3);
    assert!(gr["relations"].as_array().unwrap().is_empty());

    let out = run(&["greenberg", "compare", "--algebra", gauss.to_str().unwrap(), "--rings", "F2,F4,F2[e]"], dir.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    let parts = v["parts"].as_array().unwrap();
    let f2 = &parts[0]["details"];
    assert_eq!(f2["injective"], true);
    assert_eq!(f2["surjective"], true);
    let dual = &parts[2]["details"];
    assert_eq!(dual["perfect"], false);
    assert_eq!(dual["injective"], false);
    assert!(dual["witness"].is_object());

    let empty = run(&["greenberg", "compare", "--algebra", gauss.to_str().unwrap(), "--rings", ""], dir.path());
    assert_eq!(code(&empty), 4);
}

#[test]
fn witt_op_arithmetic() {
    let dir = tempfile::tempdir().unwrap();
    let op = |args: &[&str]| stdout_json(&run(args, dir.path()))["result"].clone();
    // 1 + 1 = 2 = V(1) in W_1(F2) = Z/4
    assert_eq!(op(&["witt-op", "add", "--ring", "F2", "--x", "[1,0]", "--y", "[1,0]"]), serde_json::json!([[0], [1]]));
    // F(V(1)) = 2 = 0 in W_0(F2)
    assert_eq!(op(&["witt-op", "frobenius", "--ring", "F2", "--x", "[0,1]"]), serde_json::json!([[0]]));
    assert_eq!(op(&["witt-op", "teichmuller", "--ring", "F4", "--x", "[[0,1]]"]), serde_json::json!([[0, 1], [0, 0]]));
    // u(V[e]) = 0 for q = 4
    let u = op(&["witt-op", "drinfeld", "--triple", "EISEN", "--ring", "F4[e]", "--x", "[0,[0,0,1,0]]"]);
    assert_eq!(u, serde_json::json!([[0, 0, 0, 0], [0, 0, 0, 0]]));
}
