use thiserror::Error;

/// Coarse error class, used for the CLI exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FznErrorKind {
    /// Malformed input text (exit code 2).
    Syntax,
    /// Well-formed text violating a model rule (exit code 3).
    Validation,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FznError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("{line}:{col}: unsupported builtin `{name}`")]
    UnknownBuiltin { line: u32, col: u32, name: String },
    #[error("constraint `{name}`: expected {expected} argument(s), found {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("constraint `{name}`, argument {index}: {msg}")]
    ArgType {
        name: String,
        index: usize,
        msg: String,
    },
    #[error("identifier `{0}` declared more than once")]
    DuplicateIdent(String),
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdent(String),
    #[error("second solve item requires the multi-objective extension")]
    SecondSolveItem,
    #[error("missing solve item")]
    MissingSolveItem,
    #[error("solve {0}: objective must be a declared numeric variable or literal")]
    BadObjective(String),
    #[error("variable `{name}`: {msg}")]
    BadDomain { name: String, msg: String },
    #[error("array `{name}`: declared length {declared} does not match {actual} element(s)")]
    ArrayLenMismatch {
        name: String,
        declared: usize,
        actual: usize,
    },
    #[error("array `{0}` must be assigned in its declaration")]
    UnassignedArray(String),
    #[error("float literal cannot be emitted exactly in decimal: {0}")]
    InexactFloat(String),
}

impl FznError {
    pub fn kind(&self) -> FznErrorKind {
        match self {
            FznError::Syntax { .. } => FznErrorKind::Syntax,
            _ => FznErrorKind::Validation,
        }
    }
}
