use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },

    #[error("variable index out of range: {0}")]
    VariableOutOfRange(String),

    #[error("invalid hyperplane: {0}")]
    InvalidHyperplane(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("the input is the zero polynomial")]
    ZeroPolynomial,

    #[error("the input is constant")]
    ConstantInput,

    #[error("the E-polynomial vanishes identically")]
    IdenticallyZero,

    #[error("wrong driver: {0}")]
    WrongDriver(String),

    #[error("hypothesis violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
