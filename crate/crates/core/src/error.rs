use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("malformed rational `{0}`")]
    MalformedRational(String),
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("operands refer to different generator tables")]
    TableMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grid of {evaluations} evaluations exceeds the cap of {cap}")]
    GridTooLarge { evaluations: f64, cap: u64 },
    #[error("frequencies are linearly dependent over Q")]
    Dependent,
    #[error("frequencies {0} and {1} are numerically indistinguishable")]
    Indistinguishable(String, String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("report is not Invertible")]
    NotInvertible,
    #[error("polynomial has negative spectrum; not in the analytic trace")]
    NotAnalytic,
    #[error("winding number ambiguous: {0}")]
    WindingAmbiguous(String),
    #[error("descent failed: best residual {best:e} above tolerance {tol:e}")]
    DescentFailed { best: f64, tol: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error("workspace: {0}")]
    Workspace(String),
}

pub type Result<T> = std::result::Result<T, Error>;
