// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use monoflat::cli;
use monoflat::{parse_netlist, parse_tm};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str], stdin: &[u8]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["monoflat"];
    argv.extend_from_slice(args);
    let code = cli::run(argv, &mut &stdin[..], &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn binary(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monoflat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        out.stdout,
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write_temp(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn compile_tm_standard_and_flattened() {
    let tm = fixture("contains_one.tm");
    let (code, out, err) = run(&["compile-tm", &tm, "-n", "2", "-t", "6"], b"");
    assert_eq!(code, 0, "{err}");
    assert_eq!(parse_netlist(&out).unwrap().not_count(), 2);
    assert!(err.contains("not=2"));

    let (code, out, _) = run(&["compile-tm", &tm, "-n", "2", "-t", "6", "--flattened"], b"");
    assert_eq!(code, 0);
    let flat = parse_netlist(&out).unwrap();
    assert_eq!(flat.not_count(), 0);
    assert_eq!(flat.input_count(), 4);
}

#[test]
fn compile_tm_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c.net");
    let tm = fixture("parity.tm");
    let (code, out, _) = run(
        &[
            "compile-tm",
            &tm,
            "-n",
            "1",
            "-t",
            "3",
            "--out",
            out_path.to_str().unwrap(),
        ],
        b"",
    );
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(parse_netlist(&std::fs::read_to_string(out_path).unwrap()).is_ok());
}

#[test]
fn compile_tm_precondition_and_cap_exit_2() {
    let tm = fixture("contains_one.tm");
    let (code, _, err) = run(&["compile-tm", &tm, "-n", "9", "-t", "6"], b"");
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    let (code, _, _) = run(&["--gate-cap", "10", "compile-tm", &tm, "-n", "2", "-t", "6"], b"");
    assert_eq!(code, 2);
    let (code, _, _) = run(&["compile-tm", &fixture("missing.tm"), "-n", "1", "-t", "2"], b"");
    assert_eq!(code, 2);
}

#[test]
fn flatten_bits_and_circuits() {
    assert_eq!(
        run(&["flatten", "--bits", "101"], b""),
        (0, "011001\n".into(), String::new())
    );
    assert_eq!(run(&["flatten", "--bits", "10a"], b"").0, 2);
    let (code, out, _) = run(&["flatten", &fixture("eq_not.net")], b"");
    assert_eq!(code, 0);
    let m = parse_netlist(&out).unwrap();
    assert!(m.is_structurally_monotone());
    assert_eq!(run(&["flatten"], b"").0, 2);
}

#[test]
fn verify_equiv_on_transform_pair() {
    let dir = tempfile::tempdir().unwrap();
    let (_, m, _) = run(&["flatten", &fixture("eq_not.net")], b"");
    let m_path = write_temp(dir.path(), "m.net", &m);
    let b = fixture("eq_not.net");
    let (code, out, _) = run(&["verify", "equiv", "--flattened", &b, m_path.to_str().unwrap()], b"");
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("FLATTENED"));

    let (code, out, _) = run(&["verify", "equiv", "--flattened", &b, &fixture("eq_flat.net")], b"");
    assert_eq!(code, 0, "{out}");

    let (code, out, _) = run(&["verify", "equiv", &b, &b], b"");
    assert_eq!(code, 0, "{out}");

    // Input-count mismatch is a usage error, not a property failure.
    let (code, _, _) = run(&["verify", "equiv", &b, &fixture("eq_flat.net")], b"");
    assert_eq!(code, 2);
}

#[test]
fn verify_equiv_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let and = write_temp(dir.path(), "and.net", "input a\ninput b\nand o a b\noutput o\n");
    let or = write_temp(dir.path(), "or.net", "input a\ninput b\nor o a b\noutput o\n");
    let (code, out, _) = run(&["verify", "equiv", and.to_str().unwrap(), or.to_str().unwrap()], b"");
    assert_eq!(code, 1);
    assert_eq!(out, "kind=EQUIVALENCE witness=01 expected=0 observed=1\n");
}

#[test]
fn verify_monotone() {
    let (code, out, _) = run(&["verify", "monotone", &fixture("not.net")], b"");
    assert_eq!(code, 1);
    assert_eq!(out, "kind=MONOTONICITY witness=0,1 expected=1 observed=0\n");
    let (code, out, _) = run(&["verify", "monotone", &fixture("eq_flat.net")], b"");
    assert_eq!((code, out.as_str()), (0, "monotone\n"));
    let (code, _, _) = run(&["verify", "monotone", &fixture("eq_not.net")], b"");
    assert_eq!(code, 1);
}

#[test]
fn verify_census_prints_tables() {
    let (code, out, err) = run(&["verify", "census", "-n", "2"], b"");
    assert_eq!(code, 0);
    let tables: Vec<&str> = out.lines().collect();
    assert_eq!(tables, ["0000", "0001", "0011", "0101", "0111", "1111"]);
    assert!(err.contains('6'));
    let counts: Vec<usize> = (0..=4)
        .map(|n| run(&["verify", "census", "-n", &n.to_string()], b"").1.lines().count())
        .collect();
    assert_eq!(counts, [2, 3, 6, 20, 168]);
    assert_eq!(run(&["verify", "census", "-n", "5"], b"").0, 2);
}

#[test]
fn verify_eq_refute() {
    let (code, out, _) = run(&["verify", "eq-refute"], b"");
    assert_eq!(code, 0);
    assert!(out.contains("(0,0) <= (0,1) <= (1,1)"), "{out}");
    let (code, _, _) = run(&["verify", "eq-refute", "-n", "2"], b"");
    assert_eq!(code, 0);
}

#[test]
fn verify_dual_rail_and_tableau() {
    let (code, out, _) = run(&["--seed", "3", "verify", "dual-rail", "--samples", "20"], b"");
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("20 samples ok"));
    let (code, out, _) = run(&["verify", "tableau", &fixture("parity.tm"), "-n", "3", "-t", "5"], b"");
    assert_eq!(code, 0, "{out}");
}

#[test]
fn stream_flatten_stdin() {
    let (code, out, err) = run(&["stream-flatten"], b"0\n");
    assert_eq!(code, 0);
    assert_eq!(out, "10");
    assert_eq!(err, "read=1 written=2 peak_state_bits=3\n");
    assert_eq!(
        run(&["stream-flatten"], b""),
        (0, String::new(), "read=0 written=0 peak_state_bits=2\n".into())
    );
    assert_eq!(run(&["stream-flatten"], b"01x").0, 2);
}

#[test]
fn stream_flatten_large_input() {
    let input = vec![b'1'; 1 << 16];
    let (code, out, err) = run(&["stream-flatten"], &input);
    assert_eq!(code, 0);
    assert_eq!(out.len(), 1 << 17);
    let peak: u32 = err.trim().rsplit('=').next().unwrap().parse().unwrap();
    assert!(peak <= 17 + monoflat::transducer::CONTROL_BITS);
}

#[test]
fn stats_and_dot() {
    let (code, out, _) = run(&["stats", &fixture("eq_not.net")], b"");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "gates=7 input=2 const=0 and=2 or=1 not=2 depth=3 inputs=2 outputs=1\n"
    );
    let (code, out, _) = run(&["emit-dot", &fixture("eq_not.net")], b"");
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    // p, q and e take two operands, nx and ny one, plus the output sink.
    assert_eq!(out.matches("->").count(), 2 * 3 + 2 + 1);
}

#[test]
fn trace_prints_rows() {
    let (code, out, _) = run(&["trace", &fixture("contains_one.tm"), "--bits", "01", "-t", "3"], b"");
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[2].contains("qa"), "{out}");
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(run(&[], b"").0, 2);
    assert_eq!(run(&["bogus"], b"").0, 2);
    assert_eq!(run(&["verify", "census"], b"").0, 2);
    let (code, out, _) = run(&["--help"], b"");
    assert_eq!(code, 0);
    assert!(out.contains("compile-tm"));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(dir.path(), "bad.net", "input x\nand y x z\noutput y\n");
    let (code, _, err) = run(&["stats", bad.to_str().unwrap()], b"");
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let bad_tm = write_temp(dir.path(), "bad.tm", "states: a\n");
    assert_eq!(
        run(&["compile-tm", bad_tm.to_str().unwrap(), "-n", "1", "-t", "2"], b"").0,
        2
    );
    assert!(parse_tm("states: a\n").is_err());
}

#[test]
fn binary_matches_library_and_is_deterministic() {
    let tm = fixture("parity.tm");
    let args = ["compile-tm", tm.as_str(), "-n", "3", "-t", "7"];
    let (code, first, _) = binary(&args, b"");
    assert_eq!(code, 0);
    let (_, second, _) = binary(&args, b"");
    assert_eq!(first, second);
    assert_eq!(String::from_utf8(first).unwrap(), run(&args, b"").1);

    let (code, out, err) = binary(&["stream-flatten"], b"0110");
    assert_eq!((code, out.as_slice()), (0, &b"10010110"[..]));
    assert!(err.starts_with("read=4 written=8"));
    assert_eq!(binary(&["verify", "monotone", &fixture("not.net")], b"").0, 1);
    assert_eq!(binary(&["flatten", "--bits", "10a"], b"").0, 2);
}
