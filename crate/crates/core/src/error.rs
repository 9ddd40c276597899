use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("adaptive quadrature did not converge: {0}")]
    NonConvergent(String),
    #[error("point {x} lies outside the domain: {context}")]
    DomainViolation { x: f64, context: String },
    #[error("improper integral did not stabilize under endpoint shrinking")]
    DivergentImproper,
    #[error("target {target} is not bracketed by [{lo}, {hi}]")]
    NotBracketed { target: f64, lo: f64, hi: f64 },
    #[error("strict monotonicity violated near x = {x}")]
    NonMonotoneDetected { x: f64 },
    #[error("unknown mapping `{0}`")]
    UnknownMapping(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("function is not bonded on the frame: {0}")]
    BondingViolation(String),
    #[error("value {value} falls outside the codomain {codomain}")]
    RangeViolation { value: f64, codomain: String },
    #[error("division by zero")]
    DivisorZero,
    #[error("generator derivative vanishes at x = {x}")]
    SingularGenerator { x: f64 },
    #[error("function value at x = {x} is not positive")]
    NonPositiveValue { x: f64 },
    #[error("degenerate frame: g(a) = g(b) for a != b")]
    DegenerateFrame,
    #[error("derivative ratio is not monotone on the interval")]
    NotInvertible,
    #[error("no root found in the open interval")]
    NoRoot,
    #[error("monotonicity could not be determined")]
    IndeterminateMonotonicity,
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(x: f64, context: impl Into<String>) -> Self {
        Error::DomainViolation {
            x,
            context: context.into(),
        }
    }

    /// Coarse grouping used by frontends to pick an exit status.
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            NonConvergent(_) | DivergentImproper | NoRoot | NonMonotoneDetected { .. } => {
                ErrorCategory::Numeric
            }
            Syntax { .. }
            | UnknownIdentifier { .. }
            | UnknownMapping(_)
            | InvalidParam(_)
            | InvalidInput(_)
            | Io(_) => ErrorCategory::Usage,
            _ => ErrorCategory::Domain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Usage,
    Domain,
    Numeric,
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
