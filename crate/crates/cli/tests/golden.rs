//! Byte-for-byte comparison against checked-in outputs.
//! Set `SOFTVQ_BLESS=1` to rewrite the golden files.

mod common;

use common::{golden_dir, run, run_to_file, GOLDEN};

#[test]
fn outputs_match_golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let bless = std::env::var_os("SOFTVQ_BLESS").is_some();
    let mut mismatched = Vec::new();
    for (name, args) in GOLDEN {
        let bytes = run_to_file(args, dir.path(), name);
        let path = golden_dir().join(name);
        if bless {
            std::fs::write(&path, &bytes).unwrap();
            continue;
        }
        let want = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
        if want != bytes {
            mismatched.push(*name);
        }
    }
    assert!(mismatched.is_empty(), "differs from golden: {mismatched:?}");
}

#[test]
fn stdout_equals_file_output() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in GOLDEN.iter().take(4) {
        let file = run_to_file(args, dir.path(), name);
        let out = run(args);
        assert_eq!(out.stdout, file, "{name}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in GOLDEN {
        let a = run_to_file(args, dir.path(), name);
        let b = run_to_file(args, dir.path(), &format!("again-{name}"));
        assert_eq!(a, b, "{name}");
    }
}
