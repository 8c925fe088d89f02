use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmtErrorKind {
    Syntax,
    Validation,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmtError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("out-of-scope theory symbol `{0}` (supported: Bool, Int, Real, BitVec)")]
    OutOfScope(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` declared more than once")]
    DuplicateDecl(String),
    #[error("sort mismatch in `{context}`: {msg}")]
    SortMismatch { context: String, msg: String },
    #[error("non-linear term: {0}")]
    Nonlinear(String),
    #[error("soft assertion weight must be positive, got {0}")]
    BadWeight(String),
    #[error("unsupported command `{0}`")]
    UnknownCommand(String),
    #[error("{0}")]
    BadScript(String),
}

impl SmtError {
    pub fn kind(&self) -> SmtErrorKind {
        match self {
            SmtError::Syntax { .. } => SmtErrorKind::Syntax,
            _ => SmtErrorKind::Validation,
        }
    }
}
