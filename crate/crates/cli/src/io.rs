//! Input, output and exit codes.

use std::fmt::Display;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::ValueEnum;
use echelon_core::json::{DocError, FORMAT};
use serde_json::{json, Value};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_MALFORMED: u8 = 65;
pub const EXIT_NO_INPUT: u8 = 66;
pub const EXIT_CANT_WRITE: u8 = 73;

#[derive(Clone, Copy, ValueEnum)]
pub enum OutputFormat {
    /// One line of compact JSON.
    Json,
    /// Indented JSON.
    Pretty,
}

#[derive(Debug)]
pub enum CliError {
    Invalid { code: String, message: String },
    Malformed(String),
    NoInput(String),
    CantWrite(String),
}

impl CliError {
    pub fn invalid(code: &str, message: impl Display) -> Self {
        CliError::Invalid { code: code.to_string(), message: message.to_string() }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        if e.is_malformed() {
            CliError::Malformed(e.to_string())
        } else {
            CliError::invalid(e.code(), e)
        }
    }
}

/// Prints a JSON diagnostic on stderr and picks the exit code.
pub fn fail(e: CliError) -> ExitCode {
    let (exit, code, message) = match e {
        CliError::Invalid { code, message } => (EXIT_INVALID, code, message),
        CliError::Malformed(m) => (EXIT_MALFORMED, "E_JSON".to_string(), m),
        CliError::NoInput(m) => (EXIT_NO_INPUT, "E_IO".to_string(), m),
        CliError::CantWrite(m) => (EXIT_CANT_WRITE, "E_IO".to_string(), m),
    };
    eprintln!("{}", json!({ "format": FORMAT, "error": { "code": code, "message": message } }));
    ExitCode::from(exit)
}

/// Reads a path, or stdin for "-".
pub fn read_input(arg: &str) -> Result<String, CliError> {
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::NoInput(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(arg).map_err(|e| CliError::NoInput(format!("{arg}: {e}")))
}

/// Inline JSON when the argument starts like a JSON value, else a path.
pub fn read_json_arg(arg: &str) -> Result<String, CliError> {
    match arg.trim_start().chars().next() {
        Some('[' | '{') => Ok(arg.to_string()),
        _ => read_input(arg),
    }
}

pub fn parse_json<T: for<'de> serde::Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))
}

pub fn write_output(doc: &Value, out: Option<&str>, format: OutputFormat) -> Result<(), CliError> {
    let mut text = match format {
        OutputFormat::Json => doc.to_string(),
        OutputFormat::Pretty => serde_json::to_string_pretty(doc).expect("values serialize"),
    };
    text.push('\n');
    match out {
        None | Some("-") => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A closed pipe means the reader has seen enough.
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            other => other.map_err(|e| CliError::CantWrite(format!("stdout: {e}"))),
        },
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::CantWrite(format!("{path}: {e}"))),
    }
}
