use std::fmt;

/// Errors raised across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Shapes, grids or dimensions that do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// A physical constraint (reality, transversality) is violated beyond tolerance.
    #[error("constraint violated: {what} (magnitude {magnitude:.3e}, tolerance {tolerance:.1e})")]
    Constraint {
        what: String,
        magnitude: f64,
        tolerance: f64,
    },

    /// Input that failed validation; every failed check is listed.
    #[error("validation failed: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),

    #[error("snapshot format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// One failed validation check, addressed by a dotted field path.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
    /// 1-based position in the source document, when the failure is a parse error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Violation {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            field: field.into(),
            message: message.into(),
            line: None,
            column: None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{} (line {l}, column {c}): {}", self.field, self.message),
            _ => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}
