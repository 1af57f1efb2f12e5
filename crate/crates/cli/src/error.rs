use serde_json::{json, Value};
use thiserror::Error;

use crate::dsl::ParseError;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_OTHER: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("line {line}: {source}")]
    Build { line: usize, source: exactkit::Error },
    #[error("line {line}: {message}")]
    Model { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] exactkit::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Usage(_) => EXIT_USAGE,
            CliError::Build {
                source: exactkit::Error::Budget { .. },
                ..
            }
            | CliError::Core(exactkit::Error::Budget { .. }) => EXIT_BUDGET,
            _ => EXIT_OTHER,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse(_) => "parse",
            CliError::Usage(_) => "usage",
            _ if self.exit_code() == EXIT_BUDGET => "budget",
            CliError::Build { .. } | CliError::Model { .. } => "model",
            CliError::Core(_) => "computation",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Parse(p) => {
                v["line"] = json!(p.line);
                v["column"] = json!(p.column);
                v["reason"] = json!(p.kind.tag());
            }
            CliError::Build { line, .. } | CliError::Model { line, .. } => {
                v["line"] = json!(line);
            }
            _ => {}
        }
        v
    }
}
