use thiserror::Error;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Bounds,
    Invariant,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("bounds exceeded: {0}")]
    Bounds(String),

    #[error("cells are not composable: {0}")]
    Globularity(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("morphisms do not compose: {0}")]
    BoundaryMismatch(String),

    #[error("operation undefined: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid pasting diagram: {0}")]
    Pasting(String),

    #[error("invalid category: {0}")]
    Category(String),

    #[error("{0}")]
    Invariant(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. } => ErrorKind::Parse,
            Error::Bounds(_) => ErrorKind::Bounds,
            _ => ErrorKind::Invariant,
        }
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
