//! Text front end: a small grammar for fields, symbols, framed data and
//! matrices, and deterministic key=value reports.
//!
//! ```text
//! field F7;
//! rho f = (x-2)^2*(x-3); g = [x];
//! ```

pub mod ast;
mod eval;
mod lexer;
mod parser;
mod report;

use std::fmt;

use thiserror::Error;

use crate::field::FiniteField;
use crate::framed::HomotopyMode;
use crate::selftest::run_all;

pub use eval::execute;
pub use parser::{parse, parse_field};
pub use report::Report;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("semantic error: {0}")]
    Semantic(String),
}

impl CliError {
    pub(crate) fn semantic(msg: impl fmt::Display) -> Self {
        CliError::Semantic(msg.to_string())
    }
}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Normalize,
    Tame,
    Reciprocity,
    Rho,
    Homotopy,
    ReduceFraming,
    /// Whatever the document asks for.
    Run,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize => "normalize",
            Command::Tame => "tame",
            Command::Reciprocity => "reciprocity",
            Command::Rho => "rho",
            Command::Homotopy => "homotopy",
            Command::ReduceFraming => "reduce-framing",
            Command::Run => "run",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Options {
    pub json: bool,
    /// Replaces the document's field statement.
    pub field: Option<String>,
    /// Replaces the document's homotopy mode.
    pub mode: Option<HomotopyMode>,
}

/// Rendered output and the exit code that goes with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn error_outcome(err: &CliError, json: bool) -> Outcome {
    if json {
        let mut obj = serde_json::Map::new();
        obj.insert("status".into(), "error".into());
        match err {
            CliError::Parse(p) => {
                obj.insert("kind".into(), "parse".into());
                obj.insert("line".into(), p.line.into());
                obj.insert("col".into(), p.col.into());
                obj.insert("message".into(), p.message.clone().into());
            }
            CliError::Semantic(m) => {
                obj.insert("kind".into(), "semantic".into());
                obj.insert("message".into(), m.clone().into());
            }
        }
        let stdout = serde_json::Value::Object(obj).to_string() + "\n";
        Outcome { stdout, stderr: String::new(), code: EXIT_INPUT }
    } else {
        Outcome { stdout: String::new(), stderr: format!("error: {err}\n"), code: EXIT_INPUT }
    }
}

fn run_inner(command: Command, input: &str, opts: &Options) -> Result<Report, CliError> {
    let mut doc = parse(input)?;
    if let Some(desc) = &opts.field {
        doc.field = parse_field(desc)?;
    }
    let wanted = doc.request.command();
    if command != Command::Run && command.name() != wanted {
        return Err(CliError::semantic(format!("document is a {wanted} request, not {}", command.name())));
    }
    execute(&doc, opts.mode)
}

/// The finite field named by a descriptor such as `F9 mod y^2+1`.
pub fn finite_field(desc: &str) -> Result<FiniteField, CliError> {
    let spec = parse_field(desc)?;
    if spec.function_var.is_some() {
        return Err(CliError::semantic(format!("{spec} is not a finite field")));
    }
    eval::build_finite(&spec).map(|(k, _)| k)
}

/// Parses `input`, checks it against `command` and renders the report.
pub fn run_command(command: Command, input: &str, opts: &Options) -> Outcome {
    match run_inner(command, input, opts) {
        Ok(report) => Outcome {
            stdout: if opts.json { report.render_json() } else { report.render_text() },
            stderr: String::new(),
            code: if report.verified() { EXIT_OK } else { EXIT_VERIFICATION },
        },
        Err(e) => error_outcome(&e, opts.json),
    }
}

/// Runs every acceptance suite with `seed`.
pub fn run_selftest(seed: u64, json: bool) -> Outcome {
    let report = run_all(seed);
    let stdout = if json {
        let outcomes: Vec<serde_json::Value> = report
            .outcomes
            .iter()
            .map(|o| {
                serde_json::json!({
                    "id": o.id,
                    "name": o.name,
                    "cases": o.cases,
                    "failures": o.failures,
                    "status": if o.passed() { "pass" } else { "fail" },
                    "first_failure": o.first_failure,
                })
            })
            .collect();
        let v = serde_json::json!({ "seed": seed, "criteria": outcomes, "passed": report.passed() });
        v.to_string() + "\n"
    } else {
        report.render()
    };
    Outcome { stdout, stderr: String::new(), code: if report.passed() { EXIT_OK } else { EXIT_VERIFICATION } }
}
