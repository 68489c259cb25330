use std::path::PathBuf;

use fsm_core::cli::main_with;
use fsm_core::definition::{parse_definition, render_definition, Definition};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn fsm(args: &[&str]) -> (i32, String, String) {
    let mut out = vec![];
    let mut err = vec![];
    let mut argv = vec!["fsm".to_string()];
    for a in args {
        argv.push(if a.contains('.') && !a.contains(' ') {
            fixture(a)
        } else {
            a.to_string()
        });
    }
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const FIXTURES: [&str; 15] = [
    "a-or-empty.regexp",
    "a-star-b-a-b-star.fsm",
    "a-star-b-a-b-star.regexp",
    "addorsub-draft.ctm",
    "addorsub.ctm",
    "anbn.cfg",
    "anbn.pda",
    "anbncn.csg",
    "buggy.fsm",
    "correct.fsm",
    "ends-in-b.rg",
    "ri.tm",
    "s-to-aS-or-a.cfg",
    "s-to-aS.cfg",
    "s-to-epsilon.cfg",
];

#[test]
fn every_fixture_is_canonical() {
    for name in FIXTURES {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let d = parse_definition(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(render_definition(&d), text, "{name}");
    }
}

#[test]
fn run_correct_machine() {
    assert_eq!(
        fsm(&["run", "correct.fsm", "-w", "a"]),
        (0, "accept\n".into(), String::new())
    );
    assert_eq!(fsm(&["run", "buggy.fsm", "-w", "a"]).0, 1);
    assert_eq!(fsm(&["run", "buggy.fsm", "-w", "a b b a"]).1, "accept\n");
}

#[test]
fn empty_word_and_alphabet_errors() {
    assert_eq!(fsm(&["run", "a-or-empty.regexp", "-w", ""]).1, "accept\n");
    let (code, _, err) = fsm(&["run", "correct.fsm", "-w", "c"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: word not over alphabet"), "{err}");
}

#[test]
fn emptiness() {
    assert_eq!(
        fsm(&["empty", "s-to-aS.cfg"]),
        (0, "empty\n".into(), String::new())
    );
    assert_eq!(fsm(&["empty", "s-to-aS-or-a.cfg"]).0, 1);
    assert_eq!(fsm(&["empty", "s-to-epsilon.cfg"]).1, "nonempty\n");
    assert_eq!(fsm(&["empty", "anbncn.csg"]).0, 2);
}

#[test]
fn ctm_runs() {
    let args = [
        "ctm-run",
        "addorsub.ctm",
        "--tape",
        "add1 _ I I I I _",
        "--head",
        "6",
    ];
    assert_eq!(
        fsm(&args),
        (0, "(h 7 (add1 _ I I I I I _))\n".into(), String::new())
    );
    let args = [
        "ctm-run",
        "addorsub-draft.ctm",
        "--tape",
        "add1 _ I I I I _",
        "--head",
        "6",
    ];
    assert_eq!(fsm(&args).1, "(h 2 (add1 I I I I I _))\n");
    let args = [
        "ctm-run",
        "addorsub.ctm",
        "--tape",
        "sub1 _ I I I I I I I _",
        "--head",
        "9",
    ];
    assert_eq!(fsm(&args).1, "(h 8 (sub1 _ I I I I I I _ _))\n");
}

#[test]
fn step_limit_exit_code() {
    let (code, _, err) = fsm(&["run", "ri.tm", "-w", "I", "--step-limit", "0"]);
    assert_eq!(code, 3, "{err}");
    let args = [
        "ctm-run",
        "addorsub.ctm",
        "--tape",
        "add1 _ I _",
        "--head",
        "3",
        "--step-limit",
        "2",
    ];
    assert_eq!(fsm(&args).0, 3);
}

#[test]
fn test_report_shape_and_seed() {
    let (code, out, _) = fsm(&["test", "buggy.fsm"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 100);
    assert!(out
        .lines()
        .all(|l| l.ends_with(") accept") || l.ends_with(") reject")));
    assert_eq!(
        fsm(&["test", "buggy.fsm", "--seed", "7"]),
        fsm(&["test", "buggy.fsm", "--seed", "7"])
    );
    assert_ne!(fsm(&["test", "buggy.fsm", "--seed", "7"]).1, out);
    let (_, out, _) = fsm(&["test", "anbn.cfg", "--count", "3", "--max-len", "4"]);
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn equivalence() {
    let (code, out, _) = fsm(&["equiv", "buggy.fsm", "correct.fsm"]);
    assert_eq!(code, 1);
    assert!(out.lines().any(|l| l == "(a) differs"), "{out}");
    let (code, out, _) = fsm(&["equiv", "a-star-b-a-b-star.fsm", "a-star-b-a-b-star.regexp"]);
    assert_eq!((code, out.as_str()), (0, "equivalent on sample\n"));
    assert_eq!(
        fsm(&["equiv", "anbn.cfg", "anbn.pda", "--max-len", "8"]).0,
        0
    );
}

#[test]
fn derive_outcomes() {
    assert_eq!(
        fsm(&["derive", "anbn.cfg", "-w", "a a b b"]).1,
        "S ⇒ a S b ⇒ a a S b b ⇒ a a b b\n"
    );
    assert_eq!(
        fsm(&["derive", "anbn.cfg", "-w", "a b b"]),
        (1, "not derivable\n".into(), String::new())
    );
    assert_eq!(fsm(&["derive", "correct.fsm", "-w", "a"]).0, 2);
}

#[test]
fn conversions_parse_back() {
    for (file, to, tag) in [
        ("correct.fsm", "regexp", "regexp"),
        ("correct.fsm", "grammar", "rg"),
        ("a-or-empty.regexp", "dfa", "dfa"),
        ("a-or-empty.regexp", "ndfa", "ndfa"),
        ("ends-in-b.rg", "sm", "ndfa"),
        ("anbn.cfg", "pda", "pda"),
        ("anbn.pda", "grammar", "cfg"),
        ("buggy.fsm", "reverse", "ndfa"),
    ] {
        let (code, out, err) = fsm(&["convert", file, "--to", to]);
        assert_eq!(code, 0, "{file} {to}: {err}");
        let d = parse_definition(&out).unwrap_or_else(|e| panic!("{file} {to}: {e}\n{out}"));
        assert_eq!(d.tag(), tag);
        assert_eq!(render_definition(&d), out);
    }
    let (_, out, _) = fsm(&["convert", "a-star-b-a-b-star.fsm", "--to", "reverse"]);
    let Definition::Machine(m) = parse_definition(&out).unwrap() else {
        panic!()
    };
    assert!(!m.states().iter().any(|q| q == "ds"));
    assert_eq!(fsm(&["convert", "anbncn.csg", "--to", "pda"]).0, 2);
}

#[test]
fn trace_prints_path() {
    let (code, out, _) = fsm(&["trace", "correct.fsm", "-w", "a b a"]);
    assert_eq!(code, 0);
    assert_eq!(out, "(q0 (a b a))\n(q1 (b a))\n(q2 (a))\n(q1 ())\naccept\n");
    assert_eq!(fsm(&["trace", "correct.fsm", "-w", "b"]).1, "reject\n");
}

#[test]
fn usage_errors() {
    assert_eq!(fsm(&["frobnicate"]).0, 2);
    assert_eq!(fsm(&["run", "correct.fsm"]).0, 2);
    assert_eq!(fsm(&["--help"]).0, 0);
    let (code, _, err) = fsm(&["run", "missing.fsm", "-w", "a"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"), "{err}");
}

#[test]
fn syntax_errors_name_the_file_and_position() {
    let dir = std::env::temp_dir().join(format!("fsm-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.fsm");
    std::fs::write(
        &bad,
        "(dfa (states q0)\n  (sigma a) (start q0) (finals q0) (rules (q0 a q0) (q0 a q0)))",
    )
    .unwrap();
    let (code, out, err) = fsm(&["run", bad.to_str().unwrap(), "-w", "a"]);
    assert_eq!((code, out.as_str()), (0, "accept\n"));
    assert!(
        err.contains("2:53: duplicate rule (q0 a q0) ignored"),
        "{err}"
    );
    std::fs::write(
        &bad,
        "(dfa (states q0)\n  (sigma a) (start q0) (finals q0) (rules (q0 a q0)",
    )
    .unwrap();
    let (code, _, err) = fsm(&["run", bad.to_str().unwrap(), "-w", "a"]);
    assert_eq!(code, 2);
    assert!(
        err.contains("syntax error at 2:36") && err.contains("bad.fsm"),
        "{err}"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
