//! Differential checking against an external SMT solver.
//!
//! For each (entry, width) task a benchmark file is emitted (see
//! [`crate::smt`]) and handed to the configured solver. Because the
//! benchmark asserts the negation of the equivalence, the solver's `unsat`
//! corresponds to an exhaustive [`Status::Valid`] and `sat` to
//! [`Status::CounterexampleFound`]; at exhaustively checkable widths the
//! two verdicts are compared. Timeouts and `unknown` answers are recorded
//! but decide nothing.
//!
//! [`Status::Valid`]: bvic_core::verify::Status::Valid
//! [`Status::CounterexampleFound`]: bvic_core::verify::Status::CounterexampleFound

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use anyhow::Context;
use bvic_core::verify::{verify_exhaustive, Status, MAX_EXHAUSTIVE_WIDTH};
use bvic_core::Catalog;

use crate::smt;

/// How to invoke the external solver.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub program: PathBuf,
    /// Arguments placed before the benchmark file path.
    pub args: Vec<String>,
    pub timeout: Duration,
}

/// What the solver said.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat,
    Unsat,
    /// Ran to completion without a usable verdict (an explicit `unknown`
    /// or unrecognized output).
    Unknown,
    /// Killed at the timeout.
    Timeout,
    /// Exited with a failure status and no verdict.
    Failed(String),
}

impl fmt::Display for SolverAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverAnswer::Sat => f.write_str("sat"),
            SolverAnswer::Unsat => f.write_str("unsat"),
            SolverAnswer::Unknown => f.write_str("unknown"),
            SolverAnswer::Timeout => f.write_str("timeout"),
            SolverAnswer::Failed(msg) => write!(f, "failed ({msg})"),
        }
    }
}

/// One (entry, width) comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckRow {
    pub entry: String,
    pub width: u32,
    pub benchmark: PathBuf,
    pub answer: SolverAnswer,
    /// The answer implied by exhaustive checking, at widths where that is
    /// feasible.
    pub expected: Option<SolverAnswer>,
    /// `Some(false)` exactly when solver and exhaustive checker disagree;
    /// `None` when either side has no verdict.
    pub agrees: Option<bool>,
}

/// Runs the solver on one file, killing it at the timeout.
pub fn run_solver(solver: &SolverConfig, benchmark: &Path) -> anyhow::Result<SolverAnswer> {
    let mut child = Command::new(&solver.program)
        .args(&solver.args)
        .arg(benchmark)
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .with_context(|| format!("spawning solver {}", solver.program.display()))?;
    let started = Instant::now();
    let status = loop {
        if let Some(status) = child.try_wait().context("waiting for the solver")? {
            break status;
        }
        if started.elapsed() >= solver.timeout {
            let _ = child.kill();
            let _ = child.wait();
            return Ok(SolverAnswer::Timeout);
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    // Solver answers are a line, so reading after exit cannot block long.
    let mut stdout = String::new();
    if let Some(mut pipe) = child.stdout.take() {
        let _ = pipe.read_to_string(&mut stdout);
    }
    let answer = stdout.lines().map(str::trim).find(|l| !l.is_empty());
    Ok(match answer {
        Some("sat") => SolverAnswer::Sat,
        Some("unsat") => SolverAnswer::Unsat,
        Some(_) => SolverAnswer::Unknown,
        None if status.success() => SolverAnswer::Unknown,
        None => SolverAnswer::Failed(format!("exit status {status}")),
    })
}

/// The solver answer implied by the exhaustive verdict at `width`, when
/// enumeration is feasible there.
fn expected_answer(catalog_entry: &bvic_core::ICEntry, width: u32) -> Option<SolverAnswer> {
    if width > MAX_EXHAUSTIVE_WIDTH {
        return None;
    }
    let verdict = verify_exhaustive(catalog_entry, width).ok()?;
    Some(match verdict.status {
        Status::Valid => SolverAnswer::Unsat,
        Status::CounterexampleFound => SolverAnswer::Sat,
        // Exhaustive checking cannot produce the sampling statuses.
        Status::ForwardOnly | Status::Inconclusive => return None,
    })
}

/// Emits benchmarks for every entry at every width into `dir` and compares
/// solver answers against exhaustive verdicts.
pub fn run_crosscheck(
    catalog: &Catalog,
    widths: &[u32],
    solver: &SolverConfig,
    dir: &Path,
) -> anyhow::Result<Vec<CrosscheckRow>> {
    let mut rows = Vec::new();
    for entry in catalog.entries() {
        for &width in widths {
            let benchmark = smt::write_benchmarks(&[entry], &[width], dir)?
                .pop()
                .expect("one benchmark per task");
            let answer = run_solver(solver, &benchmark)?;
            let expected = expected_answer(entry, width);
            let agrees = match (&answer, &expected) {
                (SolverAnswer::Sat | SolverAnswer::Unsat, Some(expected)) => {
                    Some(answer == *expected)
                }
                _ => None,
            };
            rows.push(CrosscheckRow {
                entry: entry.name().to_owned(),
                width,
                benchmark,
                answer,
                expected,
                agrees,
            });
        }
    }
    Ok(rows)
}

/// Rows on which the solver contradicted the exhaustive verdict.
pub fn disagreements(rows: &[CrosscheckRow]) -> Vec<&CrosscheckRow> {
    rows.iter().filter(|r| r.agrees == Some(false)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;
    use std::os::unix::fs::PermissionsExt;

    /// A stub "solver" script printing a fixed answer.
    pub(crate) fn stub_solver(dir: &Path, name: &str, body: &str) -> PathBuf {
        let path = dir.join(name);
        fs::write(&path, format!("#!/bin/sh\n{body}\n")).unwrap();
        let mut permissions = fs::metadata(&path).unwrap().permissions();
        permissions.set_mode(0o755);
        fs::set_permissions(&path, permissions).unwrap();
        path
    }

    fn config(program: PathBuf) -> SolverConfig {
        SolverConfig {
            program,
            args: vec![],
            timeout: Duration::from_secs(10),
        }
    }

    #[test]
    fn unsat_stub_agrees_on_the_seed_catalog() {
        let dir = tempfile::tempdir().unwrap();
        let stub = stub_solver(dir.path(), "always-unsat.sh", "echo unsat");
        let rows =
            run_crosscheck(&Catalog::seed(), &[1, 2], &config(stub), dir.path()).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.iter().all(|r| r.agrees == Some(true)), "{rows:?}");
        assert!(disagreements(&rows).is_empty());
    }

    #[test]
    fn sat_stub_contradicts_valid_entries() {
        let dir = tempfile::tempdir().unwrap();
        let stub = stub_solver(dir.path(), "always-sat.sh", "echo sat");
        let rows = run_crosscheck(&Catalog::seed(), &[1], &config(stub), dir.path()).unwrap();
        assert_eq!(disagreements(&rows).len(), 5);
        assert_eq!(rows[0].expected, Some(SolverAnswer::Unsat));
    }

    #[test]
    fn unknown_and_garbage_answers_decide_nothing() {
        let dir = tempfile::tempdir().unwrap();
        for body in ["echo unknown", "echo pondering..."] {
            let stub = stub_solver(dir.path(), "vague.sh", body);
            let rows = run_crosscheck(&Catalog::seed(), &[1], &config(stub), dir.path()).unwrap();
            assert!(rows.iter().all(|r| r.answer == SolverAnswer::Unknown));
            assert!(rows.iter().all(|r| r.agrees.is_none()));
        }
    }

    #[test]
    fn slow_solvers_are_killed_at_the_timeout() {
        let dir = tempfile::tempdir().unwrap();
        let stub = stub_solver(dir.path(), "sleepy.sh", "sleep 60\necho unsat");
        let solver = SolverConfig {
            program: stub,
            args: vec![],
            timeout: Duration::from_millis(100),
        };
        let bench = dir.path().join("scratch.smt2");
        fs::write(&bench, "(check-sat)\n").unwrap();
        let started = Instant::now();
        let answer = run_solver(&solver, &bench).unwrap();
        assert_eq!(answer, SolverAnswer::Timeout);
        assert!(started.elapsed() < Duration::from_secs(5));
    }

    #[test]
    fn failing_solvers_are_recorded() {
        let dir = tempfile::tempdir().unwrap();
        let stub = stub_solver(dir.path(), "broken.sh", "exit 3");
        let bench = dir.path().join("scratch.smt2");
        fs::write(&bench, "(check-sat)\n").unwrap();
        let answer = run_solver(&config(stub), &bench).unwrap();
        assert!(matches!(answer, SolverAnswer::Failed(_)), "{answer:?}");
    }

    #[test]
    fn missing_executable_is_a_hard_error() {
        let dir = tempfile::tempdir().unwrap();
        let missing = config(dir.path().join("no-such-solver"));
        let bench = dir.path().join("scratch.smt2");
        fs::write(&bench, "(check-sat)\n").unwrap();
        assert!(run_solver(&missing, &bench).is_err());
    }

    #[test]
    fn solver_arguments_are_passed_before_the_file() {
        let dir = tempfile::tempdir().unwrap();
        // The stub answers sat only when its first argument says so.
        let stub = stub_solver(
            dir.path(),
            "argv.sh",
            r#"if [ "$1" = "--please-sat" ]; then echo sat; else echo unsat; fi"#,
        );
        let bench = dir.path().join("scratch.smt2");
        fs::write(&bench, "(check-sat)\n").unwrap();
        let plain = config(stub.clone());
        assert_eq!(run_solver(&plain, &bench).unwrap(), SolverAnswer::Unsat);
        let with_arg = SolverConfig {
            args: vec!["--please-sat".to_owned()],
            ..plain
        };
        assert_eq!(run_solver(&with_arg, &bench).unwrap(), SolverAnswer::Sat);
    }
}
