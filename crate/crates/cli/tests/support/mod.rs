#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use hsk::{parse_args, run, RunOutcome};

pub struct Case {
    pub name: String,
    pub input: String,
    pub args: Vec<String>,
}

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn cases() -> Vec<Case> {
    let manifest = fs::read_to_string(fixtures().join("cases.txt")).expect("cases.txt");
    manifest
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let parts: Vec<&str> = l.split('|').map(str::trim).collect();
            assert_eq!(parts.len(), 3, "bad case line: {l}");
            Case {
                name: parts[0].to_string(),
                input: parts[1].to_string(),
                args: parts[2].split_whitespace().map(String::from).collect(),
            }
        })
        .collect()
}

/// Runs a case with extra flags appended, as the binary would.
pub fn run_case(case: &Case, extra: &[&str]) -> RunOutcome {
    let path = fixtures().join(&case.input);
    let mut argv = vec![
        "hsk".to_string(),
        case.args[0].clone(),
        path.display().to_string(),
    ];
    argv.extend(case.args[1..].iter().cloned());
    argv.extend(extra.iter().map(|s| s.to_string()));
    let config = parse_args(argv).unwrap_or_else(|e| panic!("{}: {e}", case.name));
    let text = fs::read_to_string(&path).unwrap();
    run(&config, &text)
}

/// Stdout followed by the exit status, as stored in `<name>.out`.
pub fn transcript(outcome: &RunOutcome) -> String {
    format!("{}exit: {}\n", outcome.stdout, outcome.status)
}

pub fn expected(case: &Case) -> Option<String> {
    fs::read_to_string(fixtures().join(format!("{}.out", case.name))).ok()
}
