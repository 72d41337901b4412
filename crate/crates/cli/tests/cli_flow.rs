//! End-to-end behavior of the compiled binary: exit codes, witness text,
//! cap flags, the config file, and machine-readable reports.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

fn sheafcalc(args: &[&str]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_sheafcalc"));
    command.current_dir(workspace_root());
    command.env_remove("SHEAFCALC_CONFIG");
    command.args(args);
    command.output().expect("the sheafcalc binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

#[track_caller]
fn assert_exit(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout: {}\nstderr: {}",
        stdout(output),
        stderr(output)
    );
}

#[test]
fn validate_reports_site_and_frame_summaries() {
    let output = sheafcalc(&["validate", "samples/c2-group.site.json"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("valid site"));

    let output = sheafcalc(&["validate", "samples/fork.frame.json"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("valid frame"));
    assert!(stdout(&output).contains("5 elements"));
}

#[test]
fn validate_flags_law_violations_with_diagnostics() {
    // s∘s = s breaks the declared group structure's identity/associativity
    // checks: the table conflicts with nothing, but the identity law does.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.site.json");
    std::fs::write(
        &path,
        r#"{
  "format": "sheafcalc/site@1",
  "objects": ["*"],
  "arrows": [
    { "id": "id", "dom": "*", "cod": "*" },
    { "id": "s", "dom": "*", "cod": "*" }
  ],
  "identities": [{ "object": "*", "arrow": "id" }],
  "composites": [{ "after": "s", "first": "id", "equals": "id" }],
  "coverage": { "kind": "trivial" }
}"#,
    )
    .unwrap();
    let output = sheafcalc(&["validate", path.to_str().unwrap()]);
    assert_exit(&output, 1);
    assert!(stdout(&output).contains("invalid site"));
    // The document disagrees with the implied identity composite s∘id = s.
    assert!(stdout(&output).contains("conflicting composites"));
}

#[test]
fn validate_rejects_malformed_documents_as_input_errors() {
    let dir = tempfile::tempdir().unwrap();

    let path = dir.path().join("garbage.json");
    std::fs::write(&path, "not json").unwrap();
    let output = sheafcalc(&["validate", path.to_str().unwrap()]);
    assert_exit(&output, 2);
    assert!(stdout(&output).contains("malformed document"));

    let path = dir.path().join("wrong-tag.json");
    std::fs::write(&path, r#"{ "format": "sheafcalc/site@999" }"#).unwrap();
    let output = sheafcalc(&["validate", path.to_str().unwrap()]);
    assert_exit(&output, 2);

    let output = sheafcalc(&["validate", "samples/absent.json"]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("cannot read"));
}

#[test]
fn check_exit_codes_and_witnesses() {
    let output = sheafcalc(&[
        "check",
        "--logic",
        "classical",
        "samples/c2-group.site.json",
    ]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("classical holds"));

    let output = sheafcalc(&[
        "check",
        "--logic",
        "classical",
        "samples/walking-arrow.site.json",
    ]);
    assert_exit(&output, 1);
    assert!(stdout(&output).contains("witness: at object `b` with p = {u}"));

    let output = sheafcalc(&[
        "check",
        "--sequent",
        "x & y = 0 |- y = y & ~x",
        "samples/walking-arrow.site.json",
    ]);
    assert_exit(&output, 0);

    let output = sheafcalc(&[
        "check",
        "--sequent",
        "~x = 0 |- x = 1",
        "samples/walking-arrow.site.json",
    ]);
    assert_exit(&output, 1);
    assert!(stdout(&output).contains("x = {u}"));
}

#[test]
fn check_works_on_frames() {
    let output = sheafcalc(&[
        "check",
        "--logic",
        "goedel_dummett",
        "samples/chain3.frame.json",
    ]);
    assert_exit(&output, 0);

    let output = sheafcalc(&["check", "--logic", "classical", "samples/chain3.frame.json"]);
    assert_exit(&output, 1);
    assert!(stdout(&output).contains("p = m"));

    let output = sheafcalc(&[
        "check",
        "--logic",
        "goedel_dummett",
        "samples/fork.frame.json",
    ]);
    assert_exit(&output, 1);
    // First failing assignment in element order: the incomparable pair.
    assert!(stdout(&output).contains("p = a, q = b"));
}

#[test]
fn check_rejects_bad_subjects_and_documents() {
    let output = sheafcalc(&[
        "check",
        "--logic",
        "none_such",
        "samples/c2-group.site.json",
    ]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("unknown logic"));

    let output = sheafcalc(&["check", "--sequent", "x |- ", "samples/c2-group.site.json"]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("cannot parse sequent"));

    // Missing both --logic and --sequent is a usage error.
    let output = sheafcalc(&["check", "samples/c2-group.site.json"]);
    assert_exit(&output, 2);
}

#[test]
fn ltop_emits_a_reloadable_refinement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("refined.site.json");
    let out = out.to_str().unwrap();

    let output = sheafcalc(&[
        "ltop",
        "--logic",
        "demorgan",
        "samples/cospan.site.json",
        "--emit",
        out,
    ]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    assert!(text.contains("object `a`: {f, g}; {id_a, f, g}"));
    assert!(text.contains("dense over the input coverage: yes"));
    assert!(text.contains("demorgan holds on the refined site: yes"));

    let output = sheafcalc(&["validate", out]);
    assert_exit(&output, 0);
    let output = sheafcalc(&["check", "--logic", "demorgan", out]);
    assert_exit(&output, 0);
    // The refinement changes the site: the coarse coverage refuted demorgan.
    let output = sheafcalc(&["check", "--logic", "demorgan", "samples/cospan.site.json"]);
    assert_exit(&output, 1);
    assert!(stdout(&output).contains("at object `a` with p = {f}"));
}

#[test]
fn frame_quotient_prints_classes_and_warns_on_improper_filters() {
    let output = sheafcalc(&["frame-quotient", "samples/fork.frame.json", "--seeds", "c"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    assert!(text.contains("{c, 1}"));
    assert!(text.contains("{c, 1} -> 1"));
    assert!(text.contains("quotient frame elements: 0, a, b, 1"));

    let output = sheafcalc(&["frame-quotient", "samples/fork.frame.json", "--seeds", "0"]);
    assert_exit(&output, 0);
    assert!(stdout(&output).contains("warning: the filter is improper"));
    assert!(stdout(&output).contains("quotient frame elements: 1"));

    let output = sheafcalc(&["frame-quotient", "samples/fork.frame.json", "--seeds", "zz"]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("no element named `zz`"));
}

#[test]
fn lsub_reports_nucleus_fixset_and_openness() {
    let output = sheafcalc(&["lsub", "--logic", "demorgan", "samples/fork.frame.json"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    assert!(text.contains("fixset: {0, a, b, 1}"));
    assert!(text.contains("dense: yes"));
    assert!(text.contains("fixset satisfies demorgan: yes"));

    // The command needs a frame, not a site.
    let output = sheafcalc(&["lsub", "--logic", "demorgan", "samples/c2-group.site.json"]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("needs a frame"));
}

#[test]
fn caps_stop_oversized_inputs_with_exit_3() {
    let output = sheafcalc(&[
        "--max-fanin",
        "1",
        "check",
        "--logic",
        "classical",
        "samples/c2-group.site.json",
    ]);
    assert_exit(&output, 3);
    assert!(stderr(&output).contains("exceeding the cap"));

    let output = sheafcalc(&["--max-frame", "3", "validate", "samples/fork.frame.json"]);
    assert_exit(&output, 3);
}

#[test]
fn config_file_sets_caps_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    std::fs::write(&config, r#"{ "max-fanin": 1 }"#).unwrap();

    let mut command = Command::new(env!("CARGO_BIN_EXE_sheafcalc"));
    command.current_dir(workspace_root());
    command.env("SHEAFCALC_CONFIG", &config);
    command.args([
        "check",
        "--logic",
        "classical",
        "samples/c2-group.site.json",
    ]);
    let output = command.output().unwrap();
    assert_exit(&output, 3);

    let mut command = Command::new(env!("CARGO_BIN_EXE_sheafcalc"));
    command.current_dir(workspace_root());
    command.env("SHEAFCALC_CONFIG", &config);
    command.args([
        "--max-fanin",
        "16",
        "check",
        "--logic",
        "classical",
        "samples/c2-group.site.json",
    ]);
    let output = command.output().unwrap();
    assert_exit(&output, 0);

    // A bad config file is an input error.
    std::fs::write(&config, r#"{ "max-fanin": "lots" }"#).unwrap();
    let mut command = Command::new(env!("CARGO_BIN_EXE_sheafcalc"));
    command.current_dir(workspace_root());
    command.env("SHEAFCALC_CONFIG", &config);
    command.args([
        "check",
        "--logic",
        "classical",
        "samples/c2-group.site.json",
    ]);
    let output = command.output().unwrap();
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("invalid config"));
}

#[test]
fn json_reports_mirror_the_text_verdicts() {
    let output = sheafcalc(&[
        "--json",
        "check",
        "--logic",
        "classical",
        "samples/walking-arrow.site.json",
    ]);
    assert_exit(&output, 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["command"], "check");
    assert_eq!(report["holds"], false);
    assert_eq!(report["witness"]["object"], "b");
    assert_eq!(report["witness"]["assignment"][0][0], "p");
    assert_eq!(report["witness"]["assignment"][0][1], "{u}");

    let output = sheafcalc(&[
        "--json",
        "ltop",
        "--logic",
        "demorgan",
        "samples/cospan.site.json",
    ]);
    assert_exit(&output, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["dense"], true);
    assert_eq!(report["holds"], true);
    assert_eq!(report["site"]["format"], "sheafcalc/site@1");

    let output = sheafcalc(&["--json", "corpus"]);
    assert_exit(&output, 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 11);
}

#[test]
fn corpus_suite_filter_narrows_the_run() {
    let output = sheafcalc(&["corpus", "round-trip"]);
    assert_exit(&output, 0);
    let text = stdout(&output);
    assert!(text.contains("PASS: 2 of 2 suites passed"));
    assert!(!text.contains("presheaf-oracle-matrix"));

    let output = sheafcalc(&["corpus", "no-such-suite"]);
    assert_exit(&output, 2);
    assert!(stderr(&output).contains("no suite name contains"));
}

#[test]
fn reports_are_deterministic_for_fixed_input() {
    let first = sheafcalc(&["ltop", "--logic", "demorgan", "samples/cospan.site.json"]);
    let second = sheafcalc(&["ltop", "--logic", "demorgan", "samples/cospan.site.json"]);
    assert_eq!(stdout(&first), stdout(&second));

    let first = sheafcalc(&["--json", "corpus"]);
    let second = sheafcalc(&["--json", "corpus"]);
    assert_eq!(stdout(&first), stdout(&second));
}
