use thiserror::Error;

use crate::syntax::{path_string, Path};

/// Diagnostics name the root explicitly.
fn where_(path: &[usize]) -> String {
    if path.is_empty() {
        "the root".into()
    } else {
        format!("path {}", path_string(path))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ill-formed derivation at {}: {reason}", where_(path))]
    IllFormed { path: Path, reason: String },

    #[error("eliminator at {} concludes the implication {succedent}", where_(path))]
    GammaPlusViolation { path: Path, succedent: String },

    #[error("sw at {} concludes the non-atomic formula {succedent}", where_(path))]
    SwNotAtomic { path: Path, succedent: String },

    #[error("environment mismatch: {0}")]
    EnvMismatch(String),

    #[error("step {eq} ({dir}) not applicable at {}: {reason}", where_(path))]
    StepNotApplicable {
        path: Path,
        eq: String,
        dir: String,
        reason: String,
    },

    #[error("conclusions differ: `{left}` vs `{right}`")]
    SequentMismatch { left: String, right: String },

    #[error("parse error at {line}:{col}: expected {expected}")]
    Parse {
        line: usize,
        col: usize,
        expected: String,
    },

    #[error("generation exhausted: {0}")]
    GenerationExhausted(String),

    #[error("hypothesis `{name}` used more than once (at {})", where_(path))]
    NonLinearUse { path: Path, name: String },

    #[error("hypothesis `{name}` bound but never used (at {})", where_(path))]
    UnusedHypothesis { path: Path, name: String },

    #[error("renaming does not cover `{0}`")]
    NameNotCovered(String),

    #[error("invalid renaming: {0}")]
    InvalidRenaming(String),

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("ill-formed semantic value: {0}")]
    BadValue(String),
}

impl Error {
    pub(crate) fn ill_formed(path: &[usize], reason: impl Into<String>) -> Self {
        Error::IllFormed {
            path: path.to_vec(),
            reason: reason.into(),
        }
    }

    pub(crate) fn bad_value(reason: impl Into<String>) -> Self {
        Error::BadValue(reason.into())
    }
}
