use std::path::PathBuf;

use assert_cmd::Command;
use superlie::cli::{parse_algebra, serialize_algebra};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture(&format!("golden/{name}"))).unwrap()
}

fn superlie() -> Command {
    Command::cargo_bin("superlie").unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = superlie().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn normal_form_of_t_e() {
    let f = fixture("one_one_hnn.json");
    superlie()
        .args(["normal-form", &f, "--expr", "[t,e]", "--max-deg", "3"])
        .assert()
        .success()
        .stdout("f\n");
}

#[test]
fn normal_form_prime_field() {
    let f = fixture("one_one_hnn_f7.json");
    let (code, out, _) = run(&["normal-form", &f, "--expr", "[t,e] + [e,e]"]);
    assert_eq!(code, 0);
    // d(e) = -1/2 f = 3f and [e,e] = -1/2 f = 3f mod 7
    assert_eq!(out, "6*f\n");
}

#[test]
fn normal_form_log_lists_steps() {
    let f = fixture("one_one_hnn.json");
    let (code, out, err) = run(&["normal-form", &f, "--expr", "[t,[t,e]]", "--log"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0\n");
    assert!(err.contains("eliminate"), "{err}");
}

#[test]
fn basis_one_odd_letter() {
    superlie()
        .args(["basis", "--alphabet", "x:1", "--max-len", "4"])
        .assert()
        .success()
        .stdout("x\nxx\ncounts: 1,1,0,0\n");
}

#[test]
fn basis_and_bracket_goldens() {
    let (code, out, _) = run(&["basis", "--alphabet", "y:0,x:1", "--max-len", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("basis_y0_x1.txt"));
    let (code, out, _) = run(&["bracket", "--alphabet", "y:0,x:0", "--word", "xxy"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("bracket_xxy.txt"));
}

#[test]
fn compose_and_complete_goldens() {
    for name in ["one_one_hnn", "gl11_hnn"] {
        let f = fixture(&format!("{name}.json"));
        let (code, out, _) = run(&["compose", &f]);
        assert_eq!(code, 0);
        assert_eq!(out, golden(&format!("compose_{name}.txt")), "{name}");
        let (code, out, _) = run(&["complete", &f, "--max-deg", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, golden(&format!("complete_{name}.txt")), "{name}");
        let (code, out, _) = run(&["complete", &f, "--max-deg", "5", "--format", "json"]);
        assert_eq!(code, 0);
        assert_eq!(out, golden(&format!("complete_{name}.json")), "{name}");
    }
    let f = fixture("one_one_hnn.json");
    let (_, out, _) = run(&["compose", &f, "--format", "json"]);
    assert_eq!(out, golden("compose_one_one_hnn.json"));
}

#[test]
fn compose_one_one_families() {
    let (_, out, _) = run(&["compose", &fixture("one_one_hnn.json")]);
    assert!(out.contains("w=tee g_e/f_ee"));
    assert!(out.contains("w=eef f_ee/f_ef"));
    assert!(out.contains("w=eee f_ee/f_ee"));
    let (_, bounded, _) = run(&["compose", &fixture("one_one_hnn.json"), "--max-deg", "2"]);
    assert!(!bounded.contains(" w="));
}

#[test]
fn two_gen_golden() {
    let f = fixture("one_one.json");
    let (code, out, _) = run(&["two-gen", &f, "--n-max", "2", "--max-deg", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, golden("two_gen_one_one.txt"));
    let (code, out, _) = run(&["two-gen", &f, "--n-max", "2", "--max-deg", "5", "--a-parity", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("chosen: (1,1,0)"));
}

#[test]
fn embed_check_passes() {
    for name in ["one_one_hnn.json", "gl11_hnn.json", "sl2.json"] {
        let (code, out, _) = run(&["embed-check", &fixture(name), "--max-deg", "4"]);
        assert_eq!(code, 0, "{name}");
        assert!(out.ends_with("result: pass\n"));
    }
}

#[test]
fn validate_outcomes() {
    let (code, out, _) = run(&["validate", &fixture("one_one_hnn.json")]);
    assert_eq!((code, out.as_str()), (0, "structure: valid\nderivation: valid\n"));
    let (code, out, _) = run(&["validate", &fixture("invalid_jacobi.json")]);
    assert_eq!(code, 1);
    assert_eq!(out, golden("validate_invalid_jacobi.txt"));
    let (code, out, _) = run(&["validate", &fixture("bad_derivation.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("derivation rule fails at (e,e)"));
    let (code, out, _) = run(&["validate", &fixture("inhomogeneous_derivation.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("separately"));
}

#[test]
fn semantic_errors_exit_1() {
    let (code, _, err) = run(&["validate", &fixture("duplicate_generator.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("duplicate generator"));
    let (code, _, err) = run(&["validate", &fixture("char3.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("characteristic 2,3 unsupported"));
    let (code, _, _) = run(&["bracket", "--alphabet", "y:0,x:0", "--word", "yx"]);
    assert_eq!(code, 1);
    let (code, _, err) = run(&["complete", &fixture("inhomogeneous_derivation.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("separately"));
    let (code, _, err) = run(&[
        "two-gen",
        &fixture("one_one.json"),
        "--n-max",
        "2",
        "--max-deg",
        "5",
        "--a-parity",
        "0",
        "--b-parity",
        "0",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("(0,1,1)"), "{err}");
    let (code, _, _) = run(&["normal-form", &fixture("one_one_hnn.json"), "--expr", "[t,z]"]);
    assert_eq!(code, 1);
}

#[test]
fn parse_errors_exit_2() {
    let (code, _, err) = run(&["validate", &fixture("malformed.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("line 5"), "{err}");
    let (code, _, _) = run(&["validate", &fixture("missing.json")]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["normal-form", &fixture("one_one_hnn.json"), "--expr", "[t,e"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["basis", "--alphabet", "x:2", "--max-len", "3"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["basis", "--alphabet", "x:0"]);
    assert_eq!(code, 2);
}

#[test]
fn resource_bounds_exit_3() {
    let (code, _, err) = run(&["complete", &fixture("one_one_hnn.json"), "--max-deg", "1"]);
    assert_eq!(code, 3);
    assert!(err.contains("degree bound"));
    let f = fixture("one_one.json");
    let (code, _, _) = run(&["two-gen", &f, "--n-max", "2", "--max-deg", "3"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["two-gen", &f, "--n-max", "1", "--max-deg", "5"]);
    assert_eq!(code, 3);
}

#[test]
fn outputs_are_deterministic() {
    let f = fixture("gl11_hnn.json");
    for args in [
        vec!["complete", f.as_str(), "--max-deg", "5"],
        vec!["compose", f.as_str(), "--format", "json"],
        vec!["two-gen", f.as_str(), "--n-max", "4", "--max-deg", "6"],
    ] {
        let first = superlie().args(&args).output().unwrap();
        for _ in 0..2 {
            assert_eq!(superlie().args(&args).output().unwrap(), first);
        }
    }
}

#[test]
fn canonical_files_round_trip() {
    for name in ["one_one_hnn.json", "gl11_hnn.json", "one_one.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let input = parse_algebra(&text).unwrap();
        assert_eq!(serialize_algebra(&input), text, "{name}");
    }
    // non-canonical input normalizes to a fixed point
    let text = std::fs::read_to_string(fixture("gl11_hnn_permuted.json")).unwrap();
    let once = serialize_algebra(&parse_algebra(&text).unwrap());
    assert_eq!(serialize_algebra(&parse_algebra(&once).unwrap()), once);
}

#[test]
fn one_one_file_contents() {
    let input = parse_algebra(&std::fs::read_to_string(fixture("one_one.json")).unwrap()).unwrap();
    let l = &input.algebra;
    let a = l.alphabet();
    let (e, f) = (a.letter("e").unwrap(), a.letter("f").unwrap());
    assert!(l.alpha(e, e, f).is_one());
    assert!(input.derivation.is_none() && input.subalgebra.is_none());
}
