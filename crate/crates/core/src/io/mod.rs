//! Scenario documents and occurrence scripts.

mod scenario;
mod script;
mod spans;

use std::fmt;

use serde::Serialize;

pub use scenario::{parse_scenario, serialize_scenario, Parsed, FORMAT_VERSION};
pub use script::{parse_occurrence, parse_script, Script, ScriptStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parse or validation message. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line,
            column,
            code,
            message: message.into(),
        }
    }

    pub fn warning(line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(line, column, code, message)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// `line:col code message`; warnings carry a `warning:` prefix on the message.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Error => write!(f, "{}:{} {} {}", self.line, self.column, self.code, self.message),
            Severity::Warning => write!(
                f,
                "{}:{} {} warning: {}",
                self.line, self.column, self.code, self.message
            ),
        }
    }
}
