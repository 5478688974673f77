//! End-to-end tests of the `compop` binary: exit codes, output formats,
//! byte-level determinism, config splicing, and grammar diagnostics.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_compop"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["classify", "--help"]).status.code(), Some(0));
}

#[test]
fn classify_reports_a_parabolic_symbol_as_json() {
    let out = run(&["classify", "--symbol", "psi1"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["kind"], "Parabolic");
    // The doubled fixed point sits at z = 1.
    let fp = &v["result"]["fixed_points"][0];
    assert!((fp[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(out.stdout.ends_with(b"\n"));
}

#[test]
fn fredholm_separates_the_three_range_classes() {
    let out = run(&[
        "fredholm",
        "--symbol",
        "poly:coeffs=0.5,0.5",
        "--weights",
        "dirichlet:lambda=1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"]["status"], "NotClosedRange");

    let out = run(&["fredholm", "--symbol", "mobius:theta=0,z0=0.5"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"]["status"], "Fredholm");

    let out = run(&["fredholm", "--symbol", "blaschke:zeros=0,0.5,theta=0"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["verdict"]["status"]["SemiFredholm"], 2);
}

#[test]
fn matrix_csv_has_the_fixed_header_and_reruns_are_byte_identical() {
    let args = ["matrix", "--symbol", "psi1", "--weights", "dirichlet:lambda=1", "--size", "8"];
    let first = run(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout_str(&first);
    assert!(text.starts_with("i,j,re,im\n"), "unexpected header: {}", &text[..20]);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout, "matrix output varies between runs");
}

#[test]
fn norm_doubles_sizes_up_to_the_requested_bound() {
    let out = run(&["norm", "--symbol", "hyperbolic:r=0.5", "--size", "64", "--start", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["result"]["rows"].as_array().unwrap();
    let sizes: Vec<u64> = rows.iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![16, 32, 64]);
    // Compression monotonicity: the norms must be nondecreasing.
    let norms: Vec<f64> = rows.iter().map(|r| r["sigma_max"].as_f64().unwrap()).collect();
    assert!(norms.windows(2).all(|p| p[0] <= p[1] + 1e-12), "norms decreased: {norms:?}");
}

#[test]
fn grammar_errors_point_at_the_offending_byte_and_exit_one() {
    let out = run(&["classify", "--symbol", "mobius:theta=0,z0=5q"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("at byte"), "missing position diagnostics: {err}");

    let out = run(&["matrix", "--symbol", "psi1", "--weights", "dirichlet", "--size", "4"]);
    assert_eq!(out.status.code(), Some(1));

    // An expanding symbol is a computation error, not a panic.
    let out = run(&["norm", "--symbol", "poly:coeffs=0.9,0.4", "--size", "16"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_is_rejected_for_structured_verdicts() {
    let out = run(&["classify", "--symbol", "psi1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["fredholm", "--symbol", "mobius:theta=0,z0=0.5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failed_verification_exits_two_and_passing_suites_exit_zero() {
    // The stated transfer-block bounds are measurably false off-center, so
    // the bounds suite reports failures through the exit code.
    let out = run(&["verify", "bounds", "--size", "32"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["failed"].as_u64().unwrap() > 0);

    let out = run(&["verify", "dn-eigs"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["failed"], 0);

    let out = run(&["verify", "iterate-closed-forms"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn witness_parabolic_prints_exact_fractions() {
    let out = run(&["witness", "parabolic", "--m", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.starts_with("m,s_exact,floor_exact,s,floor,ok\n"));
    assert!(text.contains("12/5"), "missing the exact step-1 sum: {text}");
    assert!(text.contains("2/5"), "missing the exact step-1 floor: {text}");
}

#[test]
fn config_files_splice_into_the_argument_list() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join(format!("compop-cfg-{}.txt", std::process::id()));
    std::fs::write(
        &path,
        "# defaults for a small section\nmatrix --symbol psi1\n--weights hardy --size 6\n",
    )
    .unwrap();

    let spliced = bin().arg("--config").arg(&path).output().unwrap();
    let direct = run(&["matrix", "--symbol", "psi1", "--weights", "hardy", "--size", "6"]);
    std::fs::remove_file(&path).ok();

    assert_eq!(spliced.status.code(), Some(0));
    assert_eq!(spliced.stdout, direct.stdout, "config splice changed the output");
}

#[test]
fn sweep_output_is_independent_of_the_thread_count() {
    let args = [
        "sweep",
        "--task",
        "norm",
        "--weights",
        "hardy;dirichlet:lambda=1",
        "--r",
        "0.3,0.5",
        "--size",
        "32",
    ];
    let single = bin().args(args).env("COMPOP_THREADS", "1").output().unwrap();
    let multi = bin().args(args).env("COMPOP_THREADS", "4").output().unwrap();
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(single.stdout, multi.stdout, "sweep output depends on the thread count");
    let text = stdout_str(&single);
    assert!(text.starts_with("weight,family,param,n,value\n"));
    // weights-major ordering: all flat-weight rows come first.
    let body: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(body.len(), 4);
    assert!(body[0].starts_with("hardy,") && body[1].starts_with("hardy,"));
    assert!(body[2].starts_with("dirichlet") && body[3].starts_with("dirichlet"));
}

#[test]
fn outputs_can_be_written_to_files() {
    let dir = std::env::temp_dir();
    let path: PathBuf = dir.join(format!("compop-out-{}.json", std::process::id()));
    let out = bin()
        .args(["classify", "--symbol", "hyperbolic:r=0.5", "--output"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty(), "file output must not duplicate to stdout");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&written).unwrap();
    assert_eq!(v["result"]["kind"], "Hyperbolic");
}
