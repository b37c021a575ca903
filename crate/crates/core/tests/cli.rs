use std::path::PathBuf;
use std::process::Command;

use partial_sync::cli::run;

fn fixture(name: &str) -> String {
    path("fixtures", name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(path("tests/golden", name)).unwrap()
}

fn path(dir: &str, name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push(dir);
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn psync(args: &[&str]) -> partial_sync::cli::CommandOutcome {
    let mut argv = vec!["psync"];
    argv.extend_from_slice(args);
    run(argv)
}

#[test]
fn sync_check_exit_codes() {
    let ok = psync(&["sync", "check", &fixture("sample6.dfa")]);
    assert_eq!(ok.code, 0);
    assert_eq!(ok.stdout.trim(), "synchronizing");

    let bad = psync(&["sync", "check", &fixture("lit-abab.dfa")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("minimal non-zero rank 2"), "{}", bad.stdout);

    assert_eq!(psync(&[]).code, 2);
    assert_eq!(psync(&["sync", "check", "/nonexistent.dfa"]).code, 2);
}

#[test]
fn literal_automaton_matches_fixture() {
    let out = psync(&["code", "literal", &fixture("lit-abab.code")]);
    assert_eq!(out.code, 0);
    let want = std::fs::read_to_string(fixture("lit-abab.dfa")).unwrap();
    assert_eq!(out.stdout, want);
}

#[test]
fn generators_are_pinned() {
    let dfa = psync(&["gen", "random-dfa", "--n", "6", "--alpha", "2", "--density", "0.9", "--seed", "42"]);
    assert_eq!(dfa.code, 0);
    assert_eq!(dfa.stdout, golden("random-dfa-n6-a2-d0.9-s42.dfa"));

    let code = psync(&["gen", "random-code", "--count", "5", "--maxlen", "6", "--alpha", "2", "--seed", "42"]);
    assert_eq!(code.code, 0);
    assert_eq!(code.stdout, golden("random-code-c5-l6-a2-s42.code"));

    let cerny = psync(&["gen", "cerny", "--n", "4"]);
    assert_eq!(cerny.stdout, golden("cerny4.dfa"));
}

#[test]
fn summary_format_is_stable() {
    let f = fixture("sample6.dfa");
    let oracle = psync(&["--format", "summary", "oracle", &f]);
    assert_eq!(oracle.code, 0);
    assert_eq!(oracle.stdout, golden("sample6.oracle.summary"));

    let coll = psync(&["--format", "summary", "sync", "word", &f, "--method", "collecting"]);
    assert_eq!(coll.code, 0);
    assert_eq!(coll.stdout, golden("sample6.collecting.summary"));
}

#[test]
fn word_output_reports_rank_and_length() {
    let f = fixture("sample6.dfa");
    for method in ["greedy", "fixing", "collecting", "oracle"] {
        let out = psync(&["sync", "word", &f, "--method", method]);
        assert_eq!(out.code, 0, "{method}: {}", out.stderr);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 2, "{method}: {}", out.stdout);
        let len = if lines[0] == "-" { 0 } else { lines[0].split(' ').count() };
        assert_eq!(lines[1], format!("rank=1 len={len}"), "{method}");
    }
    let oracle = psync(&["sync", "word", &f, "--method", "oracle"]);
    assert_eq!(oracle.stdout.lines().next(), Some("b a b"));
}

#[test]
fn invalid_code_exits_one() {
    let dir = std::env::temp_dir().join(format!("psync-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("bad.code");
    std::fs::write(&p, "a\nab\n").unwrap();
    let out = psync(&["code", "validate", p.to_str().unwrap()]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_forwards_exit_code() {
    let status = Command::new(env!("CARGO_BIN_EXE_psync"))
        .args(["sync", "check", &fixture("lit-abab.dfa")])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&status.stdout).contains("not synchronizing"));
}
