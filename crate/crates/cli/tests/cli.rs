//! End-to-end tests running the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_antichain-sat"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn tmp_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn sat_value_text_output() {
    let output = run(&["sat-value", "10", "5"]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), "38\nstatus: exact\n");
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let first = run(&["sat-value", "13", "21", "--json"]);
    let second = run(&["sat-value", "13", "21", "--json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout_of(&first);
    assert!(text.contains("\"value\":204"));
    assert!(text.contains("\"status\":\"exact\""));
}

#[test]
fn colex_lists_the_segment_in_order() {
    let output = run(&["colex", "8", "3"]);
    assert!(output.status.success());
    let expected = "1,2,3\n1,2,4\n1,3,4\n2,3,4\n1,2,5\n1,3,5\n2,3,5\n1,4,5\n";
    assert_eq!(stdout_of(&output), expected);
}

#[test]
fn construct_verify_and_skipless_roundtrip() {
    let family = tmp_path("construct_9_5.family");
    let chains = tmp_path("construct_9_5.cover");
    let rebuilt = tmp_path("construct_9_5.rebuilt");
    let built = run(&[
        "construct",
        "9",
        "5",
        "-o",
        family.to_str().unwrap(),
        "--chains",
        chains.to_str().unwrap(),
    ]);
    assert!(built.status.success());
    assert!(stdout_of(&built).starts_with("34\nstatus: exact\n"));

    let verified = run(&["verify", family.to_str().unwrap(), "5"]);
    assert_eq!(verified.status.code(), Some(0));
    assert!(stdout_of(&verified).starts_with("saturated\n"));

    let reran = run(&[
        "cover-skipless",
        chains.to_str().unwrap(),
        "-o",
        rebuilt.to_str().unwrap(),
    ]);
    assert!(reran.status.success());
    let original = std::fs::read_to_string(&chains).unwrap();
    let roundtrip = std::fs::read_to_string(&rebuilt).unwrap();
    assert_eq!(original, roundtrip);
}

#[test]
fn verify_reports_unsaturated_with_exit_one() {
    let family = tmp_path("unsaturated.family");
    std::fs::write(&family, "n=2\n-\n1\n").unwrap();
    let output = run(&["verify", family.to_str().unwrap(), "2"]);
    assert_eq!(output.status.code(), Some(1));
    let text = stdout_of(&output);
    assert!(text.starts_with("not saturated\n"));
    assert!(text.contains("culprit: addable 1,2"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["sat-value", "0", "5"]).status.code(), Some(2));
    let out = tmp_path("never_written.family");
    let construct = run(&["construct", "8", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(construct.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_three() {
    assert_eq!(run(&["oracle", "5", "2"]).status.code(), Some(3));
    let out = tmp_path("scd_too_big.cover");
    assert_eq!(
        run(&["scd", "30", "-o", out.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn duplicate_set_in_family_file_is_rejected() {
    let family = tmp_path("duplicate.family");
    std::fs::write(&family, "n=3\n1\n1\n").unwrap();
    let output = run(&["verify", family.to_str().unwrap(), "2"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn family_files_with_comments_parse() {
    let family = tmp_path("commented.family");
    std::fs::write(
        &family,
        "# two-element universe\nn=2\n\n-\n1 # singleton\n2\n1,2\n",
    )
    .unwrap();
    let output = run(&["verify", family.to_str().unwrap(), "5"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn greedy_is_seed_reproducible() {
    let first = run(&["greedy", "6", "3", "--seed", "41"]);
    let second = run(&["greedy", "6", "3", "--seed", "41"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let default_seed = run(&["greedy", "6", "3"]);
    let explicit_zero = run(&["greedy", "6", "3", "--seed", "0"]);
    assert_eq!(default_seed.stdout, explicit_zero.stdout);
    assert_ne!(first.stdout, explicit_zero.stdout);
}

#[test]
fn greedy_output_verifies_as_saturated() {
    let greedy = run(&["greedy", "6", "4", "--seed", "9"]);
    assert!(greedy.status.success());
    let family = tmp_path("greedy_6_4.family");
    std::fs::write(&family, greedy.stdout).unwrap();
    let verified = run(&["verify", family.to_str().unwrap(), "4"]);
    assert_eq!(verified.status.code(), Some(0));
}

#[test]
fn dilworth_json_carries_both_certificates() {
    let family = tmp_path("dilworth.family");
    std::fs::write(&family, "n=3\n-\n1\n2\n1,2\n").unwrap();
    let output = run(&["dilworth", family.to_str().unwrap(), "--json"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(json["value"], 2);
    let antichain = json["certificates"]["antichain"].as_array().unwrap();
    assert_eq!(antichain.len(), 2);
    let partition = json["certificates"]["partition"].as_array().unwrap();
    assert_eq!(partition.len(), 2);
    let covered: usize = partition.iter().map(|c| c.as_array().unwrap().len()).sum();
    assert_eq!(covered, 4);
}

#[test]
fn oracle_prints_value_then_witness() {
    let output = run(&["oracle", "3", "2"]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("4"));
    assert_eq!(lines.next(), Some("n=3"));
}

#[test]
fn expansion_and_cascade_print_binomial_sums() {
    let expansion = run(&["expansion", "261", "5"]);
    assert_eq!(stdout_of(&expansion), "C(10,5) + C(4,2) + C(3,1)\n");
    let cascade = run(&["cascade", "17", "3"]);
    assert_eq!(stdout_of(&cascade), "C(5,3) + C(4,2) + C(1,1)\n");
}

#[test]
fn scd_writes_a_symmetric_cover() {
    let path = tmp_path("scd_5.cover");
    let output = run(&["scd", "5", "-o", path.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(stdout_of(&output).contains("(10 chains, 32 sets)"));
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.starts_with("n=5\n"));
}
