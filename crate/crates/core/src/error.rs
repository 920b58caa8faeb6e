use thiserror::Error;

/// Errors raised by every engine in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed LP task: {0}")]
    MalformedTask(String),

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("variable {0} is not redundant (not in the final zero set)")]
    NotRedundant(usize),

    #[error("instance too large for brute force: n = {n} exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("bound not applicable: {0}")]
    NotApplicable(String),

    #[error("feasible set is empty")]
    EmptyFeasibleSet,

    #[error("bad order {0}: worst-case instance needs n >= 2")]
    BadOrder(usize),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("clause at line {line} does not have three literals over distinct variables")]
    NonTernaryClause { line: usize },

    #[error("CNF instance has not been preprocessed")]
    NotPreprocessed,

    #[error("assignment violates clause {clause}")]
    UnsatisfiedAssignment { clause: usize },

    #[error("budget exceeded: 2^{p} assignments exceed budget {budget}")]
    BudgetExceeded { p: usize, budget: u64 },

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
