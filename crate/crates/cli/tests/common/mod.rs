#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const EPOCH: &str = "1700000000";

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_softvq"));
    c.env("SOURCE_DATE_EPOCH", EPOCH);
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("UTF-8 output")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Commands pinned by golden files: (file name, arguments).
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("solve_circle_8_2.json", &["solve", "--manifold", "circle", "--M", "8", "--n", "2"]),
    ("solve_circle_8_2.csv", &["solve", "--manifold", "circle", "--M", "8", "--n", "2", "--format", "csv"]),
    ("solve_factorial_16_100.csv", &["solve", "--manifold", "torus-factorial", "--M", "16", "--n", "100", "--format", "csv"]),
    ("solve_joint_64_5.json", &["solve", "--manifold", "torus-joint", "--M", "64", "--n", "5"]),
    ("sweep_circle.csv", &["sweep", "--manifold", "circle", "--M", "8,16", "--n-min", "1", "--n-max", "10000", "--steps", "9", "--format", "csv"]),
    ("sweep_factorial.json", &["sweep", "--manifold", "torus-factorial", "--M-min", "6", "--M-max", "16", "--M-steps", "3", "--n", "2,50"]),
    ("boundary_circle.csv", &["boundary", "--kind", "two-three-circle", "--M", "8,20,50", "--format", "csv"]),
    ("boundary_factorial.csv", &["boundary", "--kind", "two-three-factorial", "--M", "16,40", "--format", "csv"]),
    ("boundary_joint_factorial.csv", &["boundary", "--kind", "joint-factorial", "--n", "1000,1000000", "--format", "csv"]),
    ("posterior_circle_8_2.csv", &["posterior", "--manifold", "circle", "--M", "8", "--n", "2", "--points", "17", "--format", "csv"]),
    ("posterior_circle_8_100.json", &["posterior", "--manifold", "circle", "--M", "8", "--n", "100", "--points", "5"]),
    ("approx_8_2.csv", &["approx", "--M", "8", "--n", "2", "--points", "9", "--format", "csv"]),
    ("verify_fast.csv", &["verify", "--level", "fast", "--seed", "0", "--format", "csv"]),
];

/// Runs `args` writing to a file and returns the file bytes.
pub fn run_to_file(args: &[&str], dir: &Path, name: &str) -> Vec<u8> {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.push("--out");
    full.push(&p);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(&path).unwrap()
}
