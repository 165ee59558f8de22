use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("`{dividend}` is not divisible by `{divisor}` in the Laurent ring")]
    NotDivisible { dividend: String, divisor: String },

    #[error("Laurent polynomial evaluated at z = 0")]
    ZeroArgument,

    #[error("Verblunsky parameter a_{index} = {value} does not satisfy |a| < 1")]
    ParamOutOfRange { index: usize, value: String },

    #[error("parameter {name} = {value} must be greater than -1")]
    ParamDomain { name: &'static str, value: String },

    #[error("`{poly}` has support outside the window [0, {degree}]")]
    BadSupport { poly: String, degree: i64 },

    #[error("Verblunsky sequence entry a_{index} = {value} is not admissible")]
    BadVerblunsky { index: usize, value: String },

    #[error("eigenvalue routine did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("quadrature did not settle: orders {order} and {next} differ by {difference:e}")]
    QuadratureUnconverged {
        order: usize,
        next: usize,
        difference: f64,
    },

    #[error("Toeplitz determinant Delta_{n} = {value} is not positive")]
    NonPositive { n: usize, value: String },

    #[error("Toeplitz determinant Delta_{n} vanishes")]
    SingularDelta { n: usize },

    #[error("moment sigma_{0} is not available")]
    MissingMoment(i64),

    #[error("degenerate algebra: {0}")]
    Degenerate(String),

    #[error("inconsistent representation equations: {0}")]
    InconsistentSystem(String),

    #[error("invalid rational `{0}` (expected p/q or an integer)")]
    InvalidRational(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
