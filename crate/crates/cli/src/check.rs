//! A small lit/FileCheck-style runner for golden tests.
//!
//! A test file carries its own directives in `//` comments:
//!
//! ```text
//! // RUN: qopt %s --pass-pipeline=qcirc-to-mqtopt
//! // CHECK: mqtopt.h
//! // CHECK-NEXT: mqtopt.x
//! ```
//!
//! Every `RUN` line is executed with `%s` replaced by the file's path; only
//! `qopt` may be invoked, optionally piped into further `qopt` commands.
//! The standard output of all `RUN` lines is then matched against the
//! `CHECK` lines in order. A `CHECK` payload must occur as a substring of
//! some later output line; a `CHECK-NEXT` payload must occur on the line
//! directly after the previous match.

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::driver;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectiveKind {
    Run,
    Check,
    CheckNext,
}

impl fmt::Display for DirectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DirectiveKind::Run => "RUN",
            DirectiveKind::Check => "CHECK",
            DirectiveKind::CheckNext => "CHECK-NEXT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub kind: DirectiveKind,
    pub payload: String,
    /// 1-based line in the test file.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TestResult {
    Pass,
    Fail { line: usize, reason: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckError {
    #[error("cannot read '{path}': {message}")]
    Io { path: String, message: String },
    #[error("no RUN directive")]
    NoRunDirective,
    #[error("line {line}: only qopt may be run, not '{program}'")]
    UnsupportedCommand { line: usize, program: String },
    #[error("line {line}: malformed RUN line: {message}")]
    MalformedRun { line: usize, message: String },
    #[error("line {line}: command failed with exit code {code}: {stderr}")]
    CommandFailed {
        line: usize,
        code: i32,
        stderr: String,
    },
}

const MARKERS: [(&str, DirectiveKind); 3] = [
    ("// RUN:", DirectiveKind::Run),
    ("// CHECK-NEXT:", DirectiveKind::CheckNext),
    ("// CHECK:", DirectiveKind::Check),
];

/// Extracts directives in file order. A `RUN` line ending in `\` continues
/// on the next `RUN` line.
pub fn parse_directives(text: &str) -> Vec<Directive> {
    let mut out: Vec<Directive> = Vec::new();
    let mut continuing = false;
    for (i, line) in text.lines().enumerate() {
        let Some((kind, payload)) = MARKERS
            .iter()
            .find_map(|(m, k)| line.find(m).map(|at| (*k, line[at + m.len()..].trim())))
        else {
            continuing = false;
            continue;
        };
        let (payload, more) = match payload.strip_suffix('\\') {
            Some(p) if kind == DirectiveKind::Run => (p.trim_end(), true),
            _ => (payload, false),
        };
        match out.last_mut() {
            Some(prev) if continuing && kind == DirectiveKind::Run => {
                prev.payload.push(' ');
                prev.payload.push_str(payload);
            }
            _ => out.push(Directive {
                kind,
                payload: payload.to_string(),
                line: i + 1,
            }),
        }
        continuing = more;
    }
    out
}

/// Runs one `RUN` payload in-process and returns its standard output.
fn execute_run(run: &Directive, path: &str) -> Result<String, CheckError> {
    let words =
        shell_words::split(&run.payload.replace("%s", &shell_words::quote(path))).map_err(|e| {
            CheckError::MalformedRun {
                line: run.line,
                message: e.to_string(),
            }
        })?;
    let mut stdout = String::new();
    for command in words.split(|w| w == "|") {
        match command.first() {
            Some(p) if p == "qopt" => {}
            Some(p) => {
                return Err(CheckError::UnsupportedCommand {
                    line: run.line,
                    program: p.clone(),
                })
            }
            None => {
                return Err(CheckError::MalformedRun {
                    line: run.line,
                    message: "empty command".into(),
                })
            }
        }
        let out = driver::run(command, stdout.as_bytes());
        if out.code != 0 {
            return Err(CheckError::CommandFailed {
                line: run.line,
                code: out.code,
                stderr: out.stderr.trim_end().to_string(),
            });
        }
        stdout = out.stdout;
    }
    Ok(stdout)
}

/// Matches `CHECK` and `CHECK-NEXT` directives against `output`.
pub fn check_output(output: &str, directives: &[Directive]) -> TestResult {
    let lines: Vec<&str> = output.lines().collect();
    let mut last: Option<usize> = None;
    for d in directives {
        let found = match d.kind {
            DirectiveKind::Run => continue,
            DirectiveKind::Check => {
                let from = last.map_or(0, |l| l + 1);
                (from..lines.len()).find(|&i| lines[i].contains(&d.payload))
            }
            DirectiveKind::CheckNext => {
                let Some(prev) = last else {
                    return TestResult::Fail {
                        line: d.line,
                        reason: "CHECK-NEXT has no previous match".into(),
                    };
                };
                let next = prev + 1;
                (next < lines.len() && lines[next].contains(&d.payload)).then_some(next)
            }
        };
        match found {
            Some(i) => last = Some(i),
            None => {
                let reason = match d.kind {
                    DirectiveKind::CheckNext => format!(
                        "CHECK-NEXT: '{}' not found on the line after output line {}",
                        d.payload,
                        last.map_or(0, |l| l + 1)
                    ),
                    _ => format!("CHECK: '{}' not found in remaining output", d.payload),
                };
                return TestResult::Fail {
                    line: d.line,
                    reason,
                };
            }
        }
    }
    TestResult::Pass
}

/// Runs a test whose text is `text`; `%s` expands to `path`.
pub fn run_test_text(text: &str, path: &str) -> Result<TestResult, CheckError> {
    let directives = parse_directives(text);
    let runs: Vec<&Directive> = directives
        .iter()
        .filter(|d| d.kind == DirectiveKind::Run)
        .collect();
    if runs.is_empty() {
        return Err(CheckError::NoRunDirective);
    }
    let mut output = String::new();
    for run in runs {
        output.push_str(&execute_run(run, path)?);
    }
    Ok(check_output(&output, &directives))
}

pub fn run_test_file(path: &Path) -> Result<TestResult, CheckError> {
    let text = std::fs::read_to_string(path).map_err(|e| CheckError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    run_test_text(&text, &path.to_string_lossy())
}
