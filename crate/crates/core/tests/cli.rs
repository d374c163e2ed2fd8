use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn frobex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobex")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn verify_file(dir: &Path, name: &str, out: &Output) -> Output {
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    frobex(&["verify", path.to_str().unwrap()])
}

#[test]
fn validate_accepts_and_rejects() {
    let ok = frobex(&["validate", &fx("f2_c2.algebra.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout_json(&ok)["summary"]["dim"], 2);

    let bad = frobex(&["validate", &fx("f2_c2_nonassoc.algebra.json")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("(i,j,k) = (1,1,1)"));

    let dd = frobex(&["validate", &fx("bad_dd.complex.json")]);
    assert_eq!(dd.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&dd.stderr).contains("degree 0"));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"schema\": 1,\n  \"kind\": \n}").unwrap();
    let parse = frobex(&["validate", broken.to_str().unwrap()]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 4"));
}

#[test]
fn every_command_emits_a_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let runs: Vec<(&str, Vec<String>, &str)> = vec![
        ("frob", vec!["ext".into(), "check-frobenius".into(), fx("f3_dual.extension.json")], "Frobenius"),
        ("sep", vec!["ext".into(), "separability".into(), fx("q_s3.extension.json")], "Separable"),
        ("gp", vec!["mod".into(), "gp-test".into(), fx("f2_dual_simple.module.json"), "--bound".into(), "8".into()], "GP"),
        ("notgp", vec!["mod".into(), "gp-test".into(), fx("ut2_simple.module.json")], "NotGP"),
        (
            "transfer",
            vec!["mod".into(), "transfer".into(), fx("f3_dual.extension.json"), fx("f3_dual_regular.module.json")],
            "Consistent",
        ),
        ("three-way", vec!["graded".into(), "thm31".into(), fx("f2y_bar.complex.json")], "GP"),
        ("cgp", vec!["complex".into(), "gp-test".into(), fx("ut2_simple.complex.json")], "NotGP"),
        (
            "zigzag",
            vec!["zigzag".into(), fx("f2x_contractible.complex.json"), fx("f2x_socle.submodule.json")],
            "Extracted",
        ),
    ];
    for (name, args, verdict) in runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = frobex(&args);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["verdict"], verdict, "{name}");
        let again = frobex(&args);
        assert_eq!(out.stdout, again.stdout, "{name} is not byte-identical on rerun");
        let v = verify_file(dir.path(), &format!("{name}.json"), &out);
        assert_eq!(v.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&v.stdout));
        assert_eq!(stdout_json(&v)["accepted"], true);
    }
}

#[test]
fn undetermined_exits_with_two() {
    let out = frobex(&["mod", "gp-test", &fx("ut2_dual_slow.module.json"), "--bound", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["verdict"], "Undetermined");
    let out = frobex(&["mod", "gp-test", &fx("ut2_dual_slow.module.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "GP");
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = frobex(&["ext", "separability", &fx("m4_subalgebra.extension.json")]);
    let mut cert = stdout_json(&out);
    cert["result"]["terms"] = serde_json::json!([[1, 0, 0]]);
    let path = dir.path().join("tampered.json");
    std::fs::write(&path, serde_json::to_vec(&cert).unwrap()).unwrap();
    let v = frobex(&["verify", path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(stdout_json(&v)["accepted"], false);

    let mut cert = stdout_json(&out);
    cert["inputs"]["extension"]["document"]["ambient"]["n"] = serde_json::json!(3);
    std::fs::write(&path, serde_json::to_vec(&cert).unwrap()).unwrap();
    let v = frobex(&["verify", path.to_str().unwrap()]);
    assert_ne!(v.status.code(), Some(0));
}

#[test]
fn mismatched_fields_are_an_error() {
    let out = frobex(&["mod", "transfer", &fx("f3_dual.extension.json"), &fx("f2_dual_simple.module.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mismatch"));
}
