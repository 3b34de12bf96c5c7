use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("values are not monotone in the declared direction: {0}")]
    NonMonotone(String),
    #[error("knots must be positive, finite and strictly increasing: {0}")]
    BadKnots(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("operation requires a nondecreasing function")]
    Direction,
    #[error("value {0} is beyond the range of the function")]
    Unbounded(f64),
    #[error("improper integral diverges: {0}")]
    DivergentTail(String),
    #[error("weight condition fails: {0}")]
    Divergent(String),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("nonpositive value in log-log fit: {0}")]
    NonPositive(String),
    #[error("no sign change found while bracketing: {0}")]
    BracketFailure(String),
    #[error("function is not regular (alpha = {alpha:.4}, beta = {beta:.4})")]
    NotRegular { alpha: f64, beta: f64 },
    #[error("inconsistent fundamental sequence: {0}")]
    Inconsistent(String),
    #[error("raw Orlicz function is not admissible: {0}")]
    NotAdmissible(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("cutoff leaves too much of the integral in the tail: {0}")]
    BadCutoff(String),
    #[error("degenerate weight pair: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
