use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.extend(["..", "core", "corpus", name]);
    p.to_string_lossy().into_owned()
}

fn laxcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = laxcat(&all);
    let report = serde_json::from_slice(&out.stdout).expect("JSON report on stdout");
    (out.status.code().unwrap(), report)
}

#[test]
fn inclusion_into_the_walking_arrow_is_not_lax_epi() {
    let (code, report) = json(&["laxepi", &corpus("coinserter_counterexample.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], false);
    assert_eq!(report["witness"]["g"], "α_A");
    assert_eq!(report["witness"]["comma"], "disconnected");

    let text = laxcat(&["laxepi", &corpus("coinserter_counterexample.json")]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("α_A"));
}

#[test]
fn equivalence_is_lax_epi_but_not_dsb() {
    assert_eq!(laxcat(&["laxepi", &corpus("equifier_E.json")]).status.code(), Some(0));
    let (code, report) = json(&["dsb", &corpus("equifier_E.json")]);
    assert_eq!(code, 1);
    assert_ne!(report["witness"]["lifts"].as_array().unwrap().len(), 1);
}

#[test]
fn right_factor_of_a_factorization_is_a_dsb() {
    for input in ["coinserter_counterexample.json", "equifier_E.json", "coinserter_J.json"] {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let (code, report) = json(&["factorize", &corpus(input), "--out", out]);
        assert_eq!(code, 0, "{input}: {report}");
        for file in ["mid.json", "left.json", "right.json"] {
            assert_eq!(laxcat(&["validate", &format!("{out}/{file}")]).status.code(), Some(0));
        }
        let dsb = laxcat(&["dsb", &format!("{out}/right.json")]);
        assert_eq!(dsb.status.code(), Some(0), "{input}");
        let left = laxcat(&["laxepi", &format!("{out}/left.json")]);
        assert_eq!(left.status.code(), Some(0), "{input}");
    }
}

#[test]
fn factorization_gap_is_reported_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, report) = json(&["factorize", &corpus("splitting_gap.json"), "--out", out]);
    assert_eq!(code, 1);
    assert_eq!(report["details"]["right_dsb"], true);
    assert_eq!(report["witness"]["factor"], "left");
    assert_eq!(laxcat(&["dsb", &format!("{out}/right.json")]).status.code(), Some(0));
}

#[test]
fn dot_output_is_a_digraph() {
    let out = laxcat(&["dot", &corpus("coinserter_D.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph \"D\" {\n"));
    assert!(text.ends_with("}\n"));
    let body: Vec<&str> = text.lines().skip(1).take_while(|l| *l != "}").collect();
    assert!(body.iter().all(|l| l.starts_with("  ") && l.ends_with(';')));
    // four objects and six non-identity arrows
    assert_eq!(body.iter().filter(|l| l.contains("->")).count(), 6);
    assert_eq!(body.len(), 10);
}

#[test]
fn comma_dot_colors_each_component() {
    let out = laxcat(&["dot", "--comma", "α_A", &corpus("coinserter_counterexample.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("group=c0") && text.contains("group=c1"));
    assert!(!text.contains("->"));
}

#[test]
fn dot_writes_a_file_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.dot");
    let out = laxcat(&["dot", &corpus("coinserter_B.json"), "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(path).unwrap().starts_with("digraph"));
}

#[test]
fn reports_differ_only_in_the_timestamp() {
    let strip = |mut v: Value| {
        v.as_object_mut()
            .unwrap()
            .remove("timestamp")
            .expect("timestamp present");
        v
    };
    for args in [
        ["laxepi", "coinserter_counterexample.json"],
        ["dsb", "equifier_E.json"],
        ["fillin", "equifier_square.json"],
    ] {
        let file = corpus(args[1]);
        let (_, a) = json(&[args[0], &file]);
        let (_, b) = json(&[args[0], &file]);
        assert_eq!(strip(a), strip(b));
    }
}

#[test]
fn rejected_documents_exit_with_input_error() {
    for reject in [
        "rejects/frame_M3.json",
        "rejects/coinserter_gamma_on_C.json",
        "rejects/equifier_beta_printed.json",
    ] {
        let out = laxcat(&["validate", &corpus(reject)]);
        assert_eq!(out.status.code(), Some(2), "{reject}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn malformed_composition_entry_names_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = r#"{"kind": "category", "name": "bad", "objects": ["x"],
        "morphisms": [{"id": "1_x", "src": "x", "dst": "x"}],
        "identities": {"x": "1_x"}, "compose": [["1_x", "1_x"]]}"#;
    std::fs::write(&path, text).unwrap();
    let out = laxcat(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("compose[0]") && err.contains("(1_x, 1_x)"), "{err}");
}

#[test]
fn missing_files_and_wrong_kinds_are_input_errors() {
    assert_eq!(laxcat(&["laxepi", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(laxcat(&["dsb", &corpus("group_C4.json")]).status.code(), Some(2));
    assert_eq!(laxcat(&["bogus"]).status.code(), Some(2));
}

#[test]
fn equifier_square_has_no_diagonal() {
    let (code, report) = json(&["fillin", &corpus("equifier_square.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["details"]["diagonals_by_enumeration"], 0);
}

#[test]
fn preorder_verdicts() {
    let (code, report) = json(&["laxepi", &corpus("monotone_coinserter_P.json")]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["in_cat"], false);
    let (code, report) = json(&[
        "coinserter",
        "--verify-universal",
        &corpus("monotone_coinserter_F.json"),
        &corpus("monotone_coinserter_G.json"),
    ]);
    assert_eq!(code, 0);
    assert_eq!(report["details"]["bijective"], true);
    assert_eq!(report["details"]["universal"], true);
}

#[test]
fn inserter_projection_is_a_dsb() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let out = laxcat(&[
        "inserter",
        &corpus("equifier_R.json"),
        &corpus("equifier_S.json"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(laxcat(&["dsb", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn group_and_quantale_verdicts() {
    assert_eq!(laxcat(&["laxepi", &corpus("hom_sign_S3.json")]).status.code(), Some(0));
    let (code, report) = json(&["laxepi", "--probe-order", "6", &corpus("hom_C2_into_S3.json")]);
    assert_eq!(code, 1);
    assert!(report["witness"]["gamma"].is_string());
    let (code, report) = json(&["vlaxepi", &corpus("vfunctor_density_3chain.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["details"]["meet"], false);
}

#[test]
fn size_caps_are_input_errors() {
    let out = laxcat(&["--max-morphisms", "2", "laxepi", &corpus("equifier_E.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size cap"));
}
