use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function}: argument {arg} outside the domain ({expected})")]
    Domain {
        function: &'static str,
        arg: f64,
        expected: &'static str,
    },

    #[error("{routine}: iteration failed to converge at index {index}")]
    Convergence { routine: &'static str, index: usize },

    #[error("degenerate branch: {0}")]
    DegenerateBranch(&'static str),

    #[error("invalid scenario: {0}")]
    Validation(#[from] ValidationErrors),

    #[error("config parse error: {0}")]
    Parse(String),

    #[error("nothing to emit: the row set is empty")]
    EmptyRows,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// A single violated scenario invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Every invariant a scenario breaks, not just the first one.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn fields(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.0.iter().map(|v| v.field)
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

pub(crate) fn check_positive(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            arg: x,
            expected: "x > 0",
        })
    }
}
