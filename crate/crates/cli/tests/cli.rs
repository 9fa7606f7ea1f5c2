//! End-to-end checks of the command-line interface: output formats, preset
//! handling and the documented exit codes.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lindlat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn gap_sweep_reproduces_the_xy_chain_closed_form() {
    let out = run(&[
        "gap",
        "--preset",
        "xy_chain",
        "--param",
        "alpha=0.5",
        "--sweep",
        "phi=0.7853981633974483:1.5707963267948966:2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let gaps: Vec<f64> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("parameter"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    // Δ = η(1 − cos φ) at φ = π/4 and π/2.
    let want = [1.0 - (std::f64::consts::PI / 4.0).cos(), 1.0];
    assert_eq!(gaps.len(), 2);
    for (gap, want) in gaps.iter().zip(want) {
        assert!((gap - want).abs() < 1e-8, "gap {gap} vs {want}");
    }
}

#[test]
fn json_output_carries_metadata_and_parses() {
    let out = run(&[
        "decay",
        "--preset",
        "xy_chain",
        "--param",
        "zeta=0.25",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"command\": \"decay\""));
    assert!(text.contains("\"modes\""));
    assert!(text.contains("\"xi_bounds\""));
    // The dominant decay mode of this model is −0.0194 ± 0.5634i.
    assert!(text.contains("5.6344"), "{text}");
}

#[test]
fn model_errors_exit_with_code_2() {
    let out = run(&["steady", "--preset", "no_such_model"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));

    let out = run(&["steady", "--preset", "xy_chain", "--param", "eta=-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_code_4() {
    let out = run(&["gap", "--preset", "xy_chain"]); // missing --sweep
    assert_eq!(out.status.code(), Some(4));

    let out = run(&["steady", "--preset", "xy_chain", "--grid", "banana"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn help_and_version_exit_cleanly() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
