use std::path::PathBuf;
use std::process::Command;

use ordgram::cli::run;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn ordgram(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("ordgram").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn temp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ordgram-cli-{}-{name}", std::process::id()))
}

#[test]
fn synth_prints_known_shapes() {
    let (code, out, _) = ordgram(&["synth", "w"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("start: W\nW -> 0 | 1 W\n"));
    let (_, out, _) = ordgram(&["synth", "w^w"]);
    assert!(out.contains("E -> 0 | 1 E W0\nW0 -> 0 | 1 W0\n"));
    let (_, out, _) = ordgram(&["synth", "0"]);
    assert!(out.ends_with("terminals: 0 1\nstart: Z\n"));
}

#[test]
fn synth_rank_round_trip() {
    let file = temp("w2.grammar");
    let path = file.to_str().unwrap();
    let (code, out, _) = ordgram(&["synth", "w^2 + 3", "--out", path]);
    assert_eq!((code, out.as_str()), (0, "order type: w^2 + 3\n"));
    let (code, out, _) = ordgram(&["rank", path, "010110"]);
    assert_eq!((code, out.as_str()), (0, "w + 2\n"));
    let (_, out, _) = ordgram(&["rank", path, "110"]);
    assert_eq!(out, "w^2 + 1\n");
    let (code, _, err) = ordgram(&["rank", path, "1"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    std::fs::remove_file(file).unwrap();
}

#[test]
fn analyze_reports() {
    let (_, out, _) = ordgram(&["analyze", &data("omega2.grammar")]);
    assert!(out.contains("O1: class 0 height 0 recursive pump 1 u0 1 bound w\n"));
    assert!(out.ends_with("start O2 bound w^w\n"));
    let empty = temp("empty.grammar");
    std::fs::write(&empty, "terminals: 0 1\nstart: S\nS -> 1 S\n").unwrap();
    let (code, out, _) = ordgram(&["analyze", empty.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "empty language\n"));
    std::fs::remove_file(empty).unwrap();
}

#[test]
fn enumerate_omega_one() {
    let (code, out, _) = ordgram(&["enumerate", &data("omega1.grammar"), "--maxlen", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0\n10\n110\n1110\n11110\n");
}

#[test]
fn check_exit_codes() {
    let (code, out, _) = ordgram(&["check", &data("omega2.grammar")]);
    assert_eq!((code, out.as_str()), (0, "prefix: PASS\nwell-order: PASS\n"));
    let (code, out, _) = ordgram(&["check", &data("omega1_mutated.grammar"), "--maxlen", "3"]);
    assert_eq!(code, 1);
    assert!(out.contains("prefix O1: 1 <_p 10\n"));
}

#[test]
fn translate_and_verify() {
    let (code, out, _) = ordgram(&["translate", &data("omega_example.sys"), "--binarize"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("terminals: 0 1\nstart: F0\n"));
    let (code, out, _) = ordgram(&["verify", &data("section5.sys"), "--depth", "6", "--maxlen", "8"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("PASS"));
    let (code, _, _) = ordgram(&["translate", &data("section5.sys"), "--labeled", "--frontier"]);
    assert_eq!(code, 2);
}

#[test]
fn frontier_grammars_pass_the_probes() {
    // example3 nests its right arguments, so copies of F2 form a descending chain
    for (sys, well_ordered) in [
        ("section5.sys", true),
        ("omega_example.sys", true),
        ("intro.sys", true),
        ("example3.sys", false),
    ] {
        let file = temp(&format!("{sys}.grammar"));
        let path = file.to_str().unwrap();
        let (code, _, err) = ordgram(&["translate", &data(sys), "--binarize", "--out", path]);
        assert_eq!(code, 0, "{err}");
        let (code, out, _) = ordgram(&["check", path]);
        assert_eq!(code, if well_ordered { 0 } else { 1 }, "{sys}: {out}");
        std::fs::remove_file(file).unwrap();
    }
}

#[test]
fn pipeline_composes() {
    for expr in ["w", "w^2", "w^w", "w*2 + 1", "w^(w^2)*2 + w^3"] {
        let file = temp("pipe.grammar");
        let path = file.to_str().unwrap();
        assert_eq!(ordgram(&["synth", expr, "--out", path]).0, 0);
        assert_eq!(ordgram(&["check", path, "--maxlen", "9"]).0, 0, "{expr}");
        assert_eq!(ordgram(&["analyze", path]).0, 0);
        let first = ordgram(&["enumerate", path, "--maxlen", "9"]);
        assert_eq!(first.0, 0);
        assert_eq!(ordgram(&["enumerate", path, "--maxlen", "9"]), first);
        std::fs::remove_file(file).unwrap();
    }
}

#[test]
fn input_errors() {
    let (code, _, err) = ordgram(&["synth", "w^(w^(w))"]);
    assert_eq!(code, 2);
    assert!(err.contains("not below w^w"), "{err}");
    assert_eq!(ordgram(&["analyze", "/nonexistent/file"]).0, 2);
    assert_eq!(ordgram(&["bogus"]).0, 2);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_ordgram")).args(["synth", "w*3"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("# order type: w*3\n"));
    let out = Command::new(env!("CARGO_BIN_EXE_ordgram")).args(["check", &data("omega1_mutated.grammar")]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
