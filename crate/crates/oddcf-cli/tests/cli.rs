//! End-to-end runs of the `oddcf` binary: output shapes, round-trips through
//! the text surface, exit codes, and the diagnostic first line.

use std::process::Command;

fn oddcf(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_oddcf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("stdout is utf-8"),
        String::from_utf8(out.stderr).expect("stderr is utf-8"),
        out.status.code().expect("no signal"),
    )
}

fn stdout_ok(args: &[&str]) -> String {
    let (out, err, code) = oddcf(args);
    assert_eq!(code, 0, "args {args:?} failed: {err}");
    out
}

#[test]
fn expansions_and_their_evaluations() {
    assert_eq!(
        stdout_ok(&["expand", "2/5", "--form", "zero"]),
        "[0; 1/3, -1/1, 1/1]\n"
    );
    assert_eq!(
        stdout_ok(&["expand", "2/5", "--form", "one"]),
        "[1; -1/1, 1/1, 1/1, 1/1]\n"
    );
    assert_eq!(
        stdout_ok(&["expand", "2/5", "--kind", "ordinary"]),
        "[0; 2, 2]\n"
    );
    // the default expansion is odd form zero
    assert_eq!(stdout_ok(&["expand", "2/5"]), "[0; 1/3, -1/1, 1/1]\n");

    // everything printed evaluates back to the input
    for form in ["zero", "one"] {
        let text = stdout_ok(&["expand", "17/29", "--form", form]);
        assert_eq!(stdout_ok(&["eval", text.trim()]), "17/29\n");
    }
    let ord = stdout_ok(&["expand", "17/29", "--kind", "ordinary"]);
    assert_eq!(stdout_ok(&["eval", ord.trim()]), "17/29\n");
}

#[test]
fn conversion_matches_direct_expansion() {
    let ord = stdout_ok(&["expand", "17/29", "--kind", "ordinary"]);
    let converted = stdout_ok(&["convert", ord.trim()]);
    let direct = stdout_ok(&["expand", "17/29", "--form", "zero"]);
    assert_eq!(converted, direct);
}

#[test]
fn distribution_values() {
    assert_eq!(
        stdout_ok(&["eval-f", "1/2", "--exact", "--digits", "10"]),
        "F = -1 + -1*L + 1*L^2\n≈ 0.5436890127\n"
    );
    assert_eq!(
        stdout_ok(&["eval-f0", "1/3", "--exact"]),
        "F0 = 0 + 2*L + -1*L^2\n≈ 0.295597742522\n"
    );
    // without --exact only the decimal line appears
    assert_eq!(stdout_ok(&["eval-f", "0/1"]), "≈ 0.000000000000\n");
}

#[test]
fn enumeration_counts_and_ratios() {
    assert_eq!(
        stdout_ok(&["enumerate", "--level", "3"]),
        "1/4\n3/5\n3/4\n"
    );
    let cumulative = stdout_ok(&["enumerate", "--level", "4", "--cumulative"]);
    assert_eq!(cumulative.lines().count(), 12);
    assert_eq!(cumulative.lines().next(), Some("1/5"));

    let table = stdout_ok(&["counts", "--upto", "6"]);
    let last = table.lines().last().expect("table has rows");
    assert_eq!(
        last.split_whitespace().collect::<Vec<_>>(),
        ["6", "20", "43", "36"]
    );

    let ratios = stdout_ok(&["ratios", "--at", "4", "--digits", "6"]);
    assert!(ratios.contains("Y_4/Y_5 = 12/23"), "got: {ratios}");
    assert!(ratios.contains("Y_4/Z_4 = 6/5"), "got: {ratios}");
}

#[test]
fn verify_reports_and_exit_codes() {
    let (out, _, code) = oddcf(&["verify", "--suite", "field", "--max-level", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("ok   field/defining-relation"), "got: {out}");
    assert!(
        out.contains("2 checks, 0 failures (suite=field, max-level=4, seed=42)"),
        "got: {out}"
    );

    let (_, err, code) = oddcf(&["verify", "--suite", "nope"]);
    assert_eq!(code, 2);
    assert!(
        err.lines().next().unwrap().starts_with("error: domain: "),
        "got: {err}"
    );

    let (_, err, code) = oddcf(&["verify", "--max-level", "3"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: domain: "), "got: {err}");
}

#[test]
fn csv_emitters() {
    let conv = stdout_ok(&["convergence", "--max-n", "3", "--grid-level", "3"]);
    let mut lines = conv.lines();
    assert_eq!(
        lines.next(),
        Some("n,x,empirical,exact_lo,exact_hi,abs_error_bound")
    );
    // 3 depths x |Y_3| = 6 grid points
    assert_eq!(lines.count(), 18);

    let audit = stdout_ok(&["ratio-audit", "--max-level", "3"]);
    let mut lines = audit.lines();
    assert_eq!(lines.next(), Some("level,x,y,mediant,ratio_class,node_type"));
    // 2^l pairs per row, rows 0..=3
    assert_eq!(lines.count(), 1 + 2 + 4 + 8);

    let probe = stdout_ok(&["derivative-probe", "1/2", "--steps", "3"]);
    let mut lines = probe.lines();
    assert_eq!(lines.next(), Some("x,h,quotient_lo,quotient_hi"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("1/2,1/10,"), "got: {}", rows[0]);
    assert!(rows[2].starts_with("1/2,1/1000,"), "got: {}", rows[2]);
}

#[test]
fn csv_out_flag_writes_the_file() {
    let path = std::env::temp_dir().join("oddcf-cli-test-audit.csv");
    let path_str = path.to_str().expect("temp path is utf-8");
    let (out, _, code) = oddcf(&["ratio-audit", "--max-level", "2", "--out", path_str]);
    assert_eq!(code, 0);
    assert_eq!(out, "", "--out keeps stdout quiet");
    let written = std::fs::read_to_string(&path).expect("file was written");
    assert!(written.starts_with("level,x,y,mediant,"), "got: {written}");
    assert_eq!(written.lines().count(), 1 + 1 + 2 + 4);
    std::fs::remove_file(&path).ok();
}

#[test]
fn diagnostics_are_machine_parsable() {
    let cases: [(&[&str], &str); 5] = [
        (&["expand", "7/4"], "error: domain: "),
        (&["expand", "x"], "error: parse: "),
        (&["eval", "[0; 2, 0]"], "error: parse: "),
        (&["derivative-probe", "1/2", "--steps", "7"], "error: domain: "),
        (&["expand", "2/5", "--kind", "ordinary", "--form", "one"], "error: domain: "),
    ];
    for (args, prefix) in cases {
        let (_, err, code) = oddcf(args);
        assert_eq!(code, 2, "args {args:?}");
        assert!(
            err.lines().next().unwrap_or("").starts_with(prefix),
            "args {args:?} gave: {err}"
        );
    }

    // usage errors from the argument parser follow the same shape
    let (_, err, code) = oddcf(&["expand"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: usage: "), "got: {err}");

    let (out, _, code) = oddcf(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("derivative-probe"), "got: {out}");
}
