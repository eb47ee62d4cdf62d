use std::path::Path;

use sigpart_cli::{read_series_csv, run_with, EXIT_FAILED, EXIT_INVALID, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("sigpart").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn table_csv_rows_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("p.csv");
    let (code, out, _) = run(&["table", "--f", "mu", "--n-max", "250", "--out", path_str(&csv)]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("wrote 250 rows"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,logsc_p"));
    assert_eq!(lines.clone().count(), 250);
    assert_eq!(lines.nth(1), Some("2,0,0.000000"));

    let rows = read_series_csv(&csv).unwrap();
    let table = sigpart::partition_table(sigpart::SignedWeight::Mu, 250).unwrap();
    for (n, v) in rows {
        assert!((v - table.logsc(n as usize)).abs() <= 5e-7);
    }

    let again = dir.path().join("q.csv");
    run(&["table", "--f", "mu", "--n-max", "250", "--out", path_str(&again)]);
    assert_eq!(std::fs::read(&csv).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn cache_is_reused_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("lambda.tsv");
    let args = ["table", "--f", "lambda", "--n-max", "120", "--format", "text", "--cache", path_str(&cache)];
    let (code, first, _) = run(&args);
    assert_eq!(code, EXIT_OK, "{first}");
    assert!(first.contains("zero values at n = [2, 8, 9, 11, 25]"));
    let (code, second, _) = run(&args);
    assert_eq!(code, EXIT_OK);
    assert_eq!(first, second);

    let text = std::fs::read_to_string(&cache).unwrap();
    std::fs::write(&cache, text.replacen("\n3\t-1\n", "\n3\t1\n", 1)).unwrap();
    let (code, _, err) = run(&args);
    assert_eq!(code, EXIT_INVALID, "{err}");
}

#[test]
fn invalid_input_exits_two() {
    assert_eq!(run(&["threshold", "--K", "3", "--C", "1"]).0, EXIT_INVALID);
    assert_eq!(run(&["threshold", "--K", "10", "--C", "-1"]).0, EXIT_INVALID);
    assert_eq!(run(&["table", "--f", "mu", "--n-max", "10", "--bogus"]).0, EXIT_INVALID);
    assert_eq!(run(&["predict", "--f", "mu", "--n", "50"]).0, EXIT_INVALID);
    assert_eq!(run(&["saddle", "--f", "one", "--x", "1000"]).0, EXIT_INVALID);
    let (code, _, err) = run(&["zeros", "--zeros-file", "/nonexistent/zeros.txt"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("/nonexistent/zeros.txt"));
    // The built-in table does not reach 2^15.
    assert_eq!(run(&["residues", "--kind", "lambda", "--K", "15"]).0, EXIT_INVALID);
}

#[test]
fn malformed_zero_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z.txt");
    std::fs::write(&file, "14.134725142\n21.022039639\n20.5\n").unwrap();
    let (code, _, err) = run(&["zeros", "--zeros-file", path_str(&file)]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn residues_and_threshold_emit_margin() {
    let (code, out, _) = run(&["residues", "--kind", "lambda", "--K", "7", "--list", "1"]);
    assert_eq!(code, EXIT_OK);
    let margin = out.lines().find_map(|l| l.strip_prefix("margin=")).unwrap();
    let margin: sigpart::ExtReal = margin.parse().unwrap();
    assert!((margin.to_f64() - sigpart::c0_lambda()).abs() < 1e-8);

    let (code, out, _) = run(&["threshold", "--K", "7", "--C", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("threshold holds"));

    // 31 C exp(-(pi/5) 256) exceeds c0 once C is near 1e70.
    let (code, out, _) = run(&["threshold", "--K", "7", "--C", "1e72"]);
    assert_eq!(code, EXIT_FAILED);
    let margin = out.lines().find_map(|l| l.strip_prefix("margin=")).unwrap();
    assert!(margin.starts_with('-'), "{margin}");
}

#[test]
fn environment_supplies_default_zero_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("z.txt");
    std::fs::write(&file, "# first three\n14.134725142\n21.022039639\n25.010857580\n").unwrap();
    std::env::set_var(sigpart_cli::ZEROS_ENV, &file);
    let (code, out, _) = run(&["zeros", "--height", "22"]);
    std::env::remove_var(sigpart_cli::ZEROS_ENV);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("3 ordinates"), "{out}");
    assert!(out.contains("N(22) = 2"));
}

#[test]
fn analytic_commands() {
    let (code, out, _) = run(&["saddle", "--f", "mu", "--x", "10000"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("phi*=-14.15"), "{out}");

    let (code, out, _) = run(&["predict", "--f", "mu", "--n", "1000", "--exact"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sign=+1"));

    let (code, out, _) = run(&["phi0", "--kind", "lambda", "--x", "1e8", "--method", "zeros"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("= -127.97"), "{out}");

    let (code, out, _) = run(&["crossing"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("e50"), "{out}");
}

#[test]
fn verify_zero_lists() {
    let (code, out, _) = run(&["verify", "--suite", "zero-lists", "--n-max", "10000"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 2);
}

#[test]
fn verify_fast_suites() {
    for suite in ["oracle", "constants", "signs", "crossing", "trudgian"] {
        let (code, out, err) = run(&["verify", "--suite", suite]);
        assert_eq!(code, EXIT_OK, "{suite}: {out}{err}");
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn plots_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for p in [&a, &b] {
        let (code, _, err) = run(&["plot", "--figure", "envelope", "--samples", "500", "--out", path_str(p)]);
        assert_eq!(code, EXIT_OK, "{err}");
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(bytes).unwrap().contains("<polyline"));
    let (code, _, _) = run(&["plot", "--figure", "envelope", "--samples", "1", "--out", path_str(&a)]);
    assert_eq!(code, EXIT_INVALID);
}
