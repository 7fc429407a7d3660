use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("series did not converge within {max_terms} terms")]
    BudgetExceeded { max_terms: usize },

    #[error("quadratic form ({a}, {b}, {c}) is not positive definite")]
    NotPositiveDefinite { a: f64, b: f64, c: f64 },

    #[error("lattice parameter ({x}, {y}) is not in the fundamental domain")]
    NotReduced { x: f64, y: f64 },

    #[error("({x}, {y}) lies outside the region x in [0, 1/2], y >= 1/sqrt(2)")]
    DomainViolation { x: f64, y: f64 },

    #[error("potential is not absolutely summable on a 2D lattice: {0}")]
    NonSummablePotential(String),

    #[error("lattice sum has a pole or diverges at s = {s}")]
    PoleOrDivergent { s: f64 },

    #[error("quadrature did not reach its tail bound: {0}")]
    QuadratureFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("charge assignment needs an even number of points, got {0}")]
    OddCount(usize),

    #[error("exhaustive charge search is limited to {max} points, got {n}")]
    TooLargeForExhaustive { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveParameter { name, value })
    }
}
