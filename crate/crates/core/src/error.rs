use thiserror::Error;

/// Errors produced anywhere in the arithmetic stack or the harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),

    #[error("division by exact zero")]
    DivisionByZero,

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cost bound exceeded: {0}")]
    CostBound(String),

    #[error("convergence domain violated: {0}")]
    Domain(String),

    #[error("value is not in Q_p beyond the precision floor: {0}")]
    NonRational(String),

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("cross-oracle mismatch: {0}")]
    CrossOracle(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidPrime(_)
            | Error::OutOfScope(_)
            | Error::InvalidArgument(_)
            | Error::CostBound(_)
            | Error::Parse(_)
            | Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
