//! End-to-end tests of the `stirred` binary: output formats, the exit-code
//! contract (0 verdict, 1 input error, 2 resource/feasibility limit), and
//! byte determinism.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn stirred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stirred"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn write_file(contents: &str) -> NamedTempFile {
    let mut file = NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

fn path_str(file: &NamedTempFile) -> &str {
    Path::new(file.path()).to_str().unwrap()
}

#[test]
fn gen_alternating() {
    let output = stirred(&["gen", "--n", "4", "--pattern", "alternating", "--period", "2"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "1010\n");

    let output = stirred(&["gen", "--n", "8", "--pattern", "alternating", "--period", "4"]);
    assert_eq!(stdout(&output), "11001100\n");
}

#[test]
fn gen_rejects_bad_period_with_exit_1() {
    let output = stirred(&["gen", "--n", "6", "--pattern", "alternating", "--period", "4"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn gen_random_is_deterministic_and_well_stirred() {
    let args = [
        "gen", "--n", "16", "--pattern", "random", "--kappa", "1/4", "--window", "4", "--seed",
        "7",
    ];
    let first = stirred(&args);
    let second = stirred(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let line = stdout(&first);
    let file = write_file(&line);
    let check = stirred(&["check", "--input", path_str(&file), "--kappa", "1/4", "--window", "4"]);
    assert!(stdout(&check).contains("well_stirred: true"));
}

#[test]
fn gen_random_infeasible_exits_2() {
    let output = stirred(&[
        "gen", "--n", "4", "--pattern", "random", "--kappa", "99/100", "--window", "2",
        "--max-tries", "100",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn solve_sorted_and_run_targets() {
    let file = write_file("1010\n");
    let output = stirred(&["solve", "--input", path_str(&file), "--target", "sorted"]);
    assert!(output.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["initial"], "1010");
    assert_eq!(record["cost_cells"], 5);
    assert_eq!(record["cost_normalized"], "5/4");
    assert_eq!(record["steps"].as_array().unwrap().len(), 2);
    assert!(record["explored"].as_u64().unwrap() >= 1);

    let output = stirred(&["solve", "--input", path_str(&file), "--target", "run:0:2"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["cost_cells"], 2);

    let sorted = write_file("0011\n");
    let output = stirred(&["solve", "--input", path_str(&sorted), "--target", "sorted"]);
    let record: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(record["cost_cells"], 0);
    assert_eq!(record["steps"].as_array().unwrap().len(), 0);
}

#[test]
fn solve_error_paths() {
    let file = write_file("10a0\n");
    let output = stirred(&["solve", "--input", path_str(&file), "--target", "sorted"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("position 2"), "{stderr}");

    let file = write_file("1010\n");
    let output = stirred(&["solve", "--input", path_str(&file), "--target", "run:2:1"]);
    assert_eq!(output.status.code(), Some(1));

    let output = stirred(&["solve", "--input", path_str(&file), "--target", "sorted", "--limit", "1"]);
    assert_eq!(output.status.code(), Some(2));

    let wide = write_file(&"10".repeat(16));
    let output = stirred(&["solve", "--input", path_str(&wide), "--target", "sorted"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn bound_certificates() {
    let output = stirred(&["bound", "--kappa", "1/2", "--eps", "1/1024"]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "{\"kappa\":\"1/2\",\"eps\":\"1/1024\",\"n_eps\":8,\"bound\":\"1/4\",\"degenerate\":false}\n"
    );

    let output = stirred(&["bound", "--kappa", "1/2", "--eps", "1/8"]);
    assert_eq!(
        stdout(&output),
        "{\"kappa\":\"1/2\",\"eps\":\"1/8\",\"n_eps\":0,\"bound\":\"0\",\"degenerate\":true}\n"
    );

    let output = stirred(&["bound", "--kappa", "3/2", "--eps", "1/8"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn scaling_csv_rows() {
    let output = stirred(&[
        "scaling", "--kappa", "2/5", "--k-min", "2", "--k-max", "2", "--exact-cap", "16",
    ]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "eps,N,kappa,heur_cost,exact_cost,lower_bound,n_eps\n0.5,4,0.4,1.5,1.25,0,0\n"
    );

    // Exact column empties out beyond the cap; heuristic cost stays <= k.
    let output = stirred(&[
        "scaling", "--kappa", "2/5", "--k-min", "4", "--k-max", "6", "--exact-cap", "16",
    ]);
    let text = stdout(&output);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for (row, k) in rows.iter().zip(4u32..) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 7);
        let n: usize = fields[1].parse().unwrap();
        assert_eq!(n, 1 << k);
        let heur: f64 = fields[3].parse().unwrap();
        assert!(heur <= k as f64);
        if n <= 16 {
            assert!(!fields[4].is_empty());
        } else {
            assert!(fields[4].is_empty());
        }
    }
}

#[test]
fn scaling_flag_validation() {
    let out_of_range = stirred(&["scaling", "--kappa", "1/2", "--k-min", "2", "--k-max", "3"]);
    assert_eq!(out_of_range.status.code(), Some(1));

    let inverted = stirred(&["scaling", "--kappa", "2/5", "--k-min", "3", "--k-max", "2"]);
    assert_eq!(inverted.status.code(), Some(1));
}

#[test]
fn mix_csv_rows() {
    let output = stirred(&["mix", "--grid", "8", "--stages", "1", "--kappa", "3/10"]);
    assert!(output.status.success());
    let text = stdout(&output);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("stage,steps,cost,scale_cells,scale"));
    assert_eq!(lines.next(), Some("0,0,0,,"));
    let stage1 = lines.next().unwrap();
    assert!(stage1.starts_with("1,2,6,"), "{stage1}");

    let output = stirred(&["mix", "--grid", "8", "--stages", "0", "--kappa", "3/10"]);
    let text = stdout(&output);
    assert_eq!(text, "stage,steps,cost,scale_cells,scale\n0,0,0,,\n");

    let output = stirred(&["mix", "--grid", "7", "--stages", "1", "--kappa", "3/10"]);
    assert_eq!(output.status.code(), Some(1));

    let output = stirred(&["mix", "--grid", "8", "--stages", "1", "--kappa", "3/10", "--radii", "9"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn check_verdicts() {
    let file = write_file("1010101010101010\n");
    let output = stirred(&["check", "--input", path_str(&file), "--kappa", "2/5", "--window", "4"]);
    assert!(output.status.success());
    assert_eq!(stdout(&output), "well_stirred: true\nxi: 1/2\n");

    let black = write_file("1111\n");
    let output = stirred(&["check", "--input", path_str(&black), "--kappa", "1/4", "--window", "2"]);
    assert!(output.status.success(), "a negative verdict still exits 0");
    assert_eq!(stdout(&output), "well_stirred: false\nxi: 1\n");

    let output = stirred(&["check", "--input", path_str(&black), "--kappa", "1/4", "--window", "9"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn validate_reports() {
    let config = write_file("1010\n");
    let steps = write_file(r#"[{"y":0,"a":1,"b":1},{"y":1,"a":2,"b":1}]"#);
    let output = stirred(&["validate", "--input", path_str(&config), "--steps", path_str(&steps)]);
    assert!(output.status.success());
    assert_eq!(
        stdout(&output),
        "valid: true\ncomplete: true\ngamma_cells: 5\ngamma_normalized: 5/4\n"
    );

    let illegal = write_file(r#"[{"y":0,"a":2,"b":1}]"#);
    let output = stirred(&["validate", "--input", path_str(&config), "--steps", path_str(&illegal)]);
    assert!(output.status.success(), "an invalid rearrangement is still a verdict");
    assert_eq!(
        stdout(&output),
        "valid: false\ncomplete: false\ngamma_cells: 0\ngamma_normalized: 0\nfailing_step: 0\n"
    );

    let malformed = write_file("not json");
    let output = stirred(&["validate", "--input", path_str(&config), "--steps", path_str(&malformed)]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn identical_flags_produce_identical_bytes() {
    let args = ["scaling", "--kappa", "1/3", "--k-min", "2", "--k-max", "8"];
    let first = stirred(&args);
    let second = stirred(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let args = ["mix", "--grid", "16", "--stages", "3", "--kappa", "3/10"];
    let first = stirred(&args);
    let second = stirred(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_flags_exit_1_and_help_exits_0() {
    let output = stirred(&["solve", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(1));

    let output = stirred(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("stirred"));
}
