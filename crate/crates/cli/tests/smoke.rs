//! Fast end-to-end checks of the command-line surface: every
//! subcommand runs once at small parameters, the output shape is
//! sane in both formats, and bad input exits with the parameter code.

use std::path::Path;
use std::process::{Command, Output};

fn lamplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamplab"))
        .args(args)
        .env_remove("LAMPLAB_OUT_DIR")
        .output()
        .expect("failed to launch the binary")
}

fn stdout_of(args: &[&str]) -> String {
    let output = lamplab(args);
    assert!(
        output.status.success(),
        "{args:?} exited {:?}: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8(output.stdout).expect("stdout must be UTF-8")
}

/// CSV output starts with a manifest comment that parses as JSON and
/// carries the subcommand name, then a header, then data rows.
fn check_csv(args: &[&str], subcommand: &str, expected_rows: Option<usize>) -> String {
    let text = stdout_of(args);
    let mut lines = text.lines();
    let manifest_line = lines.next().expect("missing manifest line");
    let manifest_json = manifest_line
        .strip_prefix("# manifest: ")
        .expect("first line must be the manifest comment");
    let manifest: serde_json::Value =
        serde_json::from_str(manifest_json).expect("manifest must be valid JSON");
    assert_eq!(manifest["subcommand"], subcommand, "in {args:?}");
    assert!(
        manifest["tool_version"].is_string(),
        "manifest must record the tool version"
    );
    let header = lines.next().expect("missing header line");
    assert!(!header.is_empty() && !header.starts_with('#'));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty(), "{args:?} produced no data rows");
    if let Some(expected) = expected_rows {
        assert_eq!(rows.len(), expected, "row count for {args:?}");
    }
    let columns = header.split(',').count();
    for row in &rows {
        assert_eq!(
            row.split(',').count(),
            columns,
            "ragged row {row:?} under header {header:?}"
        );
    }
    text
}

#[test]
fn every_subcommand_emits_wellformed_csv() {
    check_csv(
        &["coupling", "--radius", "8", "--trials", "500"],
        "coupling",
        Some(4), // radii 1, 2, 4, 8
    );
    check_csv(&["kernel", "--radius", "4"], "kernel", Some(81));
    check_csv(
        &["harmonic-check", "--group", "C2 wr Z", "--radius", "12"],
        "harmonic-check",
        Some(1),
    );
    check_csv(
        &["harmonic-check", "--group", "C2 wr Z2", "--radius", "5"],
        "harmonic-check",
        Some(1),
    );
    check_csv(
        &["growth-profile", "--group", "C2 wr Z", "--radius", "10"],
        "growth-profile",
        Some(10),
    );
    check_csv(
        &["entropy-exact", "--group", "C2 wr Z", "--steps", "5"],
        "entropy-exact",
        Some(6), // n = 0..=5
    );
    check_csv(
        &["audit-inequalities", "--trials", "500", "--steps", "6"],
        "audit-inequalities",
        None,
    );
    check_csv(
        &["visit-profile", "--group", "Z", "--steps", "256"],
        "visit-profile",
        None,
    );
    check_csv(
        &[
            "entropy-growth",
            "--group",
            "C2 wr Z",
            "--n-max",
            "256",
            "--trials",
            "10",
        ],
        "entropy-growth",
        Some(1),
    );
    check_csv(
        &[
            "expansion-check",
            "--size",
            "8",
            "--steps",
            "5",
            "--order",
            "2",
            "--alpha",
            "0.5",
        ],
        "expansion-check",
        None,
    );
    check_csv(
        &["binomial-bound", "--n-max", "40", "--m-max", "4"],
        "binomial-bound",
        Some(1),
    );
}

#[test]
fn json_format_embeds_the_manifest_and_rows() {
    let text = stdout_of(&["kernel", "--radius", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("output must be JSON");
    assert_eq!(value["manifest"]["subcommand"], "kernel");
    let rows = value["rows"].as_array().expect("rows must be an array");
    assert_eq!(rows.len(), 25);
    let origin = rows
        .iter()
        .find(|row| row["x"] == 0 && row["y"] == 0)
        .expect("origin row present");
    assert_eq!(origin["value"], 0.0);
}

#[test]
fn out_flag_writes_the_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let output = lamplab(&["kernel", "--radius", "2", "--out", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty(), "--out must suppress stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("# manifest: "));
    assert_eq!(written.lines().count(), 2 + 25);
}

#[test]
fn out_dir_environment_resolves_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_lamplab"))
        .args(["kernel", "--radius", "1", "--out", "nested/table.csv"])
        .env("LAMPLAB_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(Path::new(&dir.path().join("nested/table.csv")).exists());
}

#[test]
fn parameter_errors_exit_with_code_two() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["harmonic-check", "--group", "F2"],
        vec!["kernel", "--tol=-1"],
        vec!["kernel", "--normalization", "bogus"],
        vec!["coupling", "--trials", "0"],
        vec!["entropy-growth", "--group", "Z2", "--depth", "2"],
        vec!["expansion-check", "--size", "2"],
        vec!["no-such-subcommand"],
        vec!["kernel", "--no-such-flag"],
        vec!["kernel", "--threads", "0"],
    ];
    for args in cases {
        let output = lamplab(&args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "{args:?} should exit 2; stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        assert!(
            !output.stderr.is_empty(),
            "{args:?} should explain itself on stderr"
        );
    }
}

#[test]
fn unwritable_out_path_is_a_parameter_error() {
    // A path through a non-directory fails for any user, root included.
    let output = lamplab(&["kernel", "--radius", "1", "--out", "/dev/null/table.csv"]);
    assert_eq!(output.status.code(), Some(2));
}
