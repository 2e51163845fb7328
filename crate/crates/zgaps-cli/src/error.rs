use std::fmt;

/// Exit categories. Every failure maps to exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    Config,
    Numeric,
    Io,
}

impl Category {
    pub fn exit_code(self) -> i32 {
        match self {
            Category::Config => 2,
            Category::Numeric => 3,
            Category::Io => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Config => "CONFIG",
            Category::Numeric => "NUMERIC",
            Category::Io => "IO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub category: Category,
    pub message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError { category: Category::Config, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        CliError { category: Category::Io, message: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.category.name(), self.message)
    }
}

impl std::error::Error for CliError {}

/// Category of a library error.
pub fn category_of(e: &zgaps::Error) -> Category {
    use zgaps::Error::*;
    match e {
        Domain(_) | Character(_) | Precondition(_) | CutoffExceeded { .. } | HeightExceeded { .. } => Category::Config,
        Pole
        | Unresolved { .. }
        | NonInteger { .. }
        | StepFail { .. }
        | NoConvergence { .. }
        | Oscillation { .. }
        | MultipleCandidates { .. }
        | NonpositiveNorm { .. }
        | CountMismatch { .. }
        | GapInIndices { .. } => Category::Numeric,
        MalformedLine { .. } | NonMonotone { .. } | Io(_) => Category::Io,
    }
}

impl From<zgaps::Error> for CliError {
    fn from(e: zgaps::Error) -> Self {
        CliError { category: category_of(&e), message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::io(format!("json: {e}"))
    }
}
