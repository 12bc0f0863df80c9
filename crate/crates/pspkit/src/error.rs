use thiserror::Error;

/// Errors surfaced by parsers, solvers and generators.
#[derive(Debug, Error)]
pub enum PspError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} budget exceeded: {actual} > {limit}")]
    Budget {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("input graph is not a forest")]
    NotAForest,

    #[error("invalid {what}: {message}")]
    Invalid { what: &'static str, message: String },
}

impl PspError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        PspError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn invalid(what: &'static str, message: impl Into<String>) -> Self {
        PspError::Invalid {
            what,
            message: message.into(),
        }
    }
}

/// A single validation finding, tied to a path index when one applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn for_path(path: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            path: Some(path),
            message: message.into(),
        }
    }

    pub fn global(message: impl Into<String>) -> Self {
        Diagnostic {
            path: None,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.path {
            Some(i) => write!(f, "path {}: {}", i, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}
