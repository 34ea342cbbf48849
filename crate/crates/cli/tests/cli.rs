//! End-to-end tests driving the compiled `bcheck` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write test input");
    path
}

fn bcheck(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bcheck"));
    cmd.env_remove("BCHECK_COLOR");
    for a in args {
        cmd.arg(a.as_ref());
    }
    cmd.output().expect("run bcheck")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

// ---------------------------------------------------------------------------

#[test]
fn check_prints_the_output_context() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ }");
    let program = write(dir.path(), "p", "nil");
    let out = bcheck(&[&"check", &ctx, &program]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{ }\n");

    let ctx = write(dir.path(), "ctx2", "{ } & { }");
    let program = write(dir.path(), "p2", "nil | nil");
    let out = bcheck(&[&"check", &ctx, &program]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{ } & { }\n");
}

#[test]
fn check_reports_type_errors_on_exit_code_1() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ }");
    let program = write(dir.path(), "p", "while [ 1 ] nil");
    let out = bcheck(&[&"check", &ctx, &program]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout(&out), "", "reports belong on stdout only on success");
    let diag = stderr(&out);
    assert!(diag.contains("guard-not-bool"), "stderr was: {diag}");
    assert!(diag.contains(":1:1"), "no position in: {diag}");
    assert!(
        diag.contains("while [ 1 ] nil"),
        "no source slice in: {diag}"
    );
}

#[test]
fn check_derive_prints_the_derivation_and_derive_is_an_alias() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ } & { }");
    let program = write(dir.path(), "p", "nil | nil");
    let checked = bcheck(&[&"check", &"--derive", &ctx, &program]);
    assert_eq!(exit_code(&checked), 0);
    let text = stdout(&checked);
    assert!(
        text.starts_with("{ } & { }\n"),
        "context line first: {text}"
    );
    assert!(
        text.contains("t-par  { } & { } ⊢ nil | nil ▷ { } & { }"),
        "{text}"
    );
    assert!(text.contains("\n  t-nil  { } ⊢ nil ▷ { }"), "{text}");

    let derived = bcheck(&[&"derive", &ctx, &program]);
    assert_eq!(exit_code(&derived), 0);
    assert_eq!(stdout(&derived), text, "derive must equal check --derive");
}

#[test]
fn paper_core_restricts_the_rule_set() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ x0 : bool }");
    let core = write(dir.path(), "core", "if x0 then nil else (nil; nil)");
    let out = bcheck(&[&"check", &"--paper-core", &ctx, &core]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{ x0 : bool }\n");

    let extension = write(dir.path(), "ext", "x0 = true");
    let out = bcheck(&[&"check", &"--paper-core", &ctx, &extension]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("unsupported"), "{}", stderr(&out));
    let out = bcheck(&[&"check", &ctx, &extension]);
    assert_eq!(exit_code(&out), 0, "extensions must pass without the flag");
}

#[test]
fn paths_mode_shares_one_numbering_between_context_and_program() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(
        dir.path(),
        "ctx",
        "{ amount : int, amount.fruit.apple : int }",
    );
    let program = write(dir.path(), "p", "amount = 12; amount.fruit.apple = amount");
    let out = bcheck(&[&"check", &"--paths", &ctx, &program]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "{ x0 : int, x1 : int }\n");
}

#[test]
fn syntax_and_io_problems_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ }");
    let broken = write(dir.path(), "broken", "nil |");
    let out = bcheck(&[&"check", &ctx, &broken]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains(":1:6"), "{}", stderr(&out));

    let missing = dir.path().join("no-such-file");
    let out = bcheck(&[&"check", &ctx, &missing]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("cannot read"), "{}", stderr(&out));

    let out = bcheck(&[&"frobnicate"]);
    assert_eq!(exit_code(&out), 2, "usage errors exit 2");
}

#[test]
fn congruent_prints_a_replayable_trace_or_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a", "nil | x0 = true");
    let b = write(dir.path(), "b", "x0 = true | nil");
    let out = bcheck(&[&"congruent", &a, &b]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "root  ParComm\n");

    let out = bcheck(&[&"congruent", &a, &a]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "", "identical terms need no steps");

    let c = write(dir.path(), "c", "x0 = true; nil");
    let d = write(dir.path(), "d", "x0 = true");
    let out = bcheck(&[&"congruent", &c, &d]);
    assert_eq!(exit_code(&out), 1);
    assert_eq!(stdout(&out), "not congruent\n");
}

#[test]
fn normalize_prints_the_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p", "nil; nil");
    let out = bcheck(&[&"normalize", &p]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "nil\n");

    let q = write(dir.path(), "q", "(x0 = true | nil) | x1 = true");
    let out = bcheck(&[&"normalize", &q]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out), "x0 = true | x1 = true\n");
}

#[test]
fn selftest_tallies_and_exit_codes() {
    let out = bcheck(&[&"selftest", &"--max-size", &"3"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(
        text.contains("ok    typing agrees with the brute-force search"),
        "{text}"
    );
    assert!(text.contains("checks passed"), "{text}");

    let out = bcheck(&[&"selftest", &"--max-size", &"0"]);
    assert_eq!(exit_code(&out), 0);
    assert!(
        stdout(&out).contains("selftest: 0 checks passed"),
        "{}",
        stdout(&out)
    );

    let out = bcheck(&[&"selftest", &"--max-size", &"9"]);
    assert_eq!(exit_code(&out), 2, "sizes above 8 are a usage error");
}

#[test]
fn injected_faults_fail_the_selftest_with_a_counterexample() {
    for fault in ["if-branch-contexts", "seq-threading", "par-comm-no-swap"] {
        let out = bcheck(&[&"selftest", &"--max-size", &"3", &"--inject-fault", &fault]);
        assert_eq!(exit_code(&out), 1, "{fault} went unnoticed");
        let text = stdout(&out);
        assert!(text.contains("FAIL"), "{fault}: {text}");
        assert!(text.contains("invalid derivation"), "{fault}: {text}");
    }
}

#[test]
fn diagnostics_are_colored_only_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = write(dir.path(), "ctx", "{ }");
    let program = write(dir.path(), "p", "while [ 1 ] nil");

    let plain = bcheck(&[&"check", &ctx, &program]);
    assert!(!stderr(&plain).contains('\x1b'), "{}", stderr(&plain));

    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bcheck"));
    cmd.env("BCHECK_COLOR", "1")
        .args(["check"])
        .arg(&ctx)
        .arg(&program);
    let colored = cmd.output().expect("run bcheck");
    assert_eq!(exit_code(&colored), 1);
    assert!(
        stderr(&colored).contains("\x1b[1;31merror\x1b[0m"),
        "{}",
        stderr(&colored)
    );
}
