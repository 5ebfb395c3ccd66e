//! Golden case table shared by the CLI and acceptance targets.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests/golden").join(format!("{name}.out"))
}

/// `(name, args)` from `tests/golden/cases.txt`.
pub fn cases() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(manifest_dir().join("tests/golden/cases.txt")).expect("case table");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').expect("name: args");
            (name.trim().to_string(), args.split_whitespace().map(String::from).collect())
        })
        .collect()
}

/// Stdout, then stderr, then the exit status. Clap's usage text is long and
/// version dependent, so only the first stderr line is kept for the
/// `bad-verb` case.
pub fn run_case(name: &str, args: &[String]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_ptmtopo"))
        .args(args)
        .current_dir(manifest_dir())
        .output()
        .expect("binary runs");
    let mut stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    if name == "bad-verb" {
        stderr = format!("{}\n", stderr.lines().next().unwrap_or(""));
    }
    format!(
        "{}--- stderr\n{}--- exit {}\n",
        String::from_utf8_lossy(&out.stdout),
        stderr,
        out.status.code().expect("exited normally")
    )
}
