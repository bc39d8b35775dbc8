use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use statcat::cli::{parse_vector, ModelFile};
use statcat::{zoo, FockVector, TensorWord};

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models()
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn statcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_statcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_run(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = statcat(&all);
    let code = out.status.code().unwrap();
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

fn status(report: &Value, name: &str) -> String {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))["status"]
        .as_str()
        .unwrap()
        .to_string()
}

fn ranks(report: &Value) -> Vec<u64> {
    report["results"]["sector_dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["rank"].as_u64().unwrap())
        .collect()
}

#[test]
fn bundled_files_match_zoo() {
    for (name, m) in zoo::bundled() {
        let file = ModelFile::load(&models().join(format!("{name}.json"))).unwrap();
        assert_eq!(file.to_model().unwrap(), m, "{name}");
    }
}

#[test]
fn model_file_round_trips() {
    for (name, m) in zoo::bundled() {
        let file = ModelFile::from_model(&m, None);
        let text = serde_json::to_string(&file).unwrap();
        let back: ModelFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_model().unwrap(), m, "{name}");
    }
}

#[test]
fn check_fermion() {
    let (code, r) = json_run(&["check", &model("fermion")]);
    assert_eq!(code, 0);
    assert_eq!(ranks(&r), vec![1, 3, 3, 1, 0]);
    assert!(r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn check_anyon() {
    let (code, r) = json_run(&["check", &model("anyon_z4")]);
    assert_eq!(code, 1);
    assert_eq!(status(&r, "normalized"), "fail");
    assert_eq!(status(&r, "yang_baxter"), "pass");
    assert_eq!(status(&r, "gram_psd@n=2"), "skipped");
}

#[test]
fn check_quon_fails_only_on_symmetry() {
    let (code, r) = json_run(&["check", &model("quon_q05")]);
    assert_eq!(code, 1);
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, vec!["braid_squares_to_identity"]);
    assert_eq!(ranks(&r), vec![1, 2, 4, 8, 16]);
}

#[test]
fn check_overrides() {
    let (code, r) = json_run(&["check", &model("boson"), "--nmax", "3", "--tol", "1e-10"]);
    assert_eq!(code, 0);
    assert_eq!(ranks(&r), vec![1, 2, 3, 4]);
    assert_eq!(r["results"]["tolerance"], 1e-10);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        statcat(&["check", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let wrong = dir.path().join("wrong.json");
    std::fs::write(
        &wrong,
        r#"{"group":{"orders":[4]},"bicharacter":{"Q":[["1/8"]]},
            "generators":{"grades":[[1]],"pairing":[[[1,0]]]},"braid":{"kind":"grade-diagonal"}}"#,
    )
    .unwrap();
    let out = statcat(&["check", wrong.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q[0][0]"));

    assert_eq!(
        statcat(&["check", "/nonexistent.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        statcat(&["gram", &model("fermion"), "--sector", "11"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        statcat(&["apply", &model("fermion"), "--program", "x1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        statcat(&["apply", &model("fermion"), "--program", "q7"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        statcat(&["normalize", "--expr", "A (x"]).status.code(),
        Some(2)
    );
    assert_eq!(statcat(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(statcat(&["--help"]).status.code(), Some(0));
}

#[test]
fn gram_command() {
    let (code, r) = json_run(&["gram", &model("fermion"), "--sector", "2"]);
    assert_eq!(code, 0);
    assert_eq!(
        (r["results"]["rank"].as_u64(), r["results"]["full"].as_u64()),
        (Some(3), Some(9))
    );
    let (_, r) = json_run(&["gram", &model("boson"), "--sector", "3"]);
    assert_eq!(
        (r["results"]["rank"].as_u64(), r["results"]["full"].as_u64()),
        (Some(4), Some(8))
    );
    let (code, r) = json_run(&["gram", &model("anyon_z4"), "--sector", "2"]);
    assert_eq!(code, 0);
    assert!(r["results"]["min_eigenvalue"].is_null());
    assert_eq!(r["results"]["matrix"][0][0], serde_json::json!([1.0, -1.0]));
}

#[test]
fn apply_command() {
    let (code, r) = json_run(&["apply", &model("fermion"), "--program", "c1;c2;x1;b2"]);
    assert_eq!(code, 0);
    assert_eq!(
        r["results"]["output"],
        serde_json::json!([{"word": "[1]", "re": 1.0, "im": 0.0}])
    );
    let (_, r) = json_run(&["apply", &model("fermion"), "--program", "c1;a1"]);
    assert_eq!(
        r["results"]["output"],
        serde_json::json!([{"word": "[]", "re": 1.0, "im": 0.0}])
    );
    let (_, r) = json_run(&[
        "apply",
        &model("boson"),
        "--program",
        "a2",
        "--vector",
        "2*[2] + 3*[1]",
    ]);
    assert_eq!(
        r["results"]["output"],
        serde_json::json!([{"word": "[]", "re": 2.0, "im": 0.0}])
    );
}

#[test]
fn vector_syntax() {
    let v = parse_vector("2*[2] + (0,1)*[1,2] + -[1] + []", 2).unwrap();
    let c = |re, im| num_complex::Complex64::new(re, im);
    let expected = FockVector::from_terms([
        (TensorWord::new(vec![1]), c(2.0, 0.0)),
        (TensorWord::new(vec![0, 1]), c(0.0, 1.0)),
        (TensorWord::new(vec![0]), c(-1.0, 0.0)),
        (TensorWord::vacuum(), c(1.0, 0.0)),
    ]);
    assert_eq!(v, expected);
    assert!(parse_vector("[3]", 2).is_err());
    assert!(parse_vector("2*", 2).is_err());
    assert!(parse_vector("[1] +", 2).is_err());
}

#[test]
fn transmute_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("target.json");
    let (code, r) = json_run(&[
        "transmute",
        &model("z2z2_fermion"),
        "--hom",
        &model("hom_z2z2_to_z2"),
        "--target-bichar",
        &model("bichar_z2"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["written"], true);
    let emitted = ModelFile::load(&out).unwrap().to_model().unwrap();
    assert_eq!(emitted, zoo::fermion(2));

    let (code, r) = json_run(&[
        "transmute",
        &model("z2_fermion"),
        "--hom",
        &model("hom_z2_to_z4"),
        "--target-bichar",
        &model("bichar_z4"),
        "--out",
        dir.path().join("never.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert_eq!(status(&r, "transmutation"), "fail");
    let witness = r["checks"][0]["witness"].as_str().unwrap();
    assert!(witness.starts_with("((1), (1))"), "{witness}");
    assert!(!dir.path().join("never.json").exists());

    let id_out = dir.path().join("id.json");
    let (code, _) = json_run(&[
        "transmute",
        &model("z2z2_fermion"),
        "--hom",
        &model("hom_z2z2_identity"),
        "--target-bichar",
        &model("bichar_z2z2"),
        "--out",
        id_out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let source = ModelFile::load(&models().join("z2z2_fermion.json")).unwrap();
    let target = ModelFile::load(&id_out).unwrap();
    assert_eq!(target.to_model().unwrap(), source.to_model().unwrap());
    assert_eq!(target, source);
}

#[test]
fn normalize_command() {
    let (code, r) = json_run(&["normalize", "--expr", "(A (x) B)^"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["normal_form"], "B^ (x) A^");
    let (_, r) = json_run(&["normalize", "--expr", "I (x) (A (x) I)"]);
    assert_eq!(r["results"]["normal_form"], "A");
    let text = statcat(&["normalize", "--expr", "I (x) A^^"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("=> A\n"));
}

#[test]
fn json_reports_are_deterministic() {
    let runs: [&[&str]; 4] = [
        &["--json", "check", &model("fermion")],
        &["--json", "gram", &model("quon_q05"), "--sector", "3"],
        &[
            "--json",
            "apply",
            &model("anyon_z4"),
            "--program",
            "c1;c2;x1;b1",
        ],
        &["--json", "normalize", "--expr", "((A (x) I)^ (x) B^^)^"],
    ];
    for args in runs {
        let a = statcat(args).stdout;
        let b = statcat(args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn in_process_runner_matches_binary() {
    let args = [
        "statcat",
        "--json",
        "gram",
        &model("fermion2"),
        "--sector",
        "2",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = statcat::cli::run(args, &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(out, statcat(&args[1..]).stdout);
}
