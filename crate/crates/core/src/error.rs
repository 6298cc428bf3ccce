use thiserror::Error;

/// Errors raised by the cut, polynomial and verification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({i}, {j}) is not an edge of K_{n}: need 1 <= i < j <= n")]
    InvalidEdge { i: usize, j: usize, n: usize },

    #[error("k = {k} is outside {min}..={max} for n = {n}")]
    KOutOfRange {
        k: usize,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("n = {n} is outside the supported range {min}..={max} for {what}")]
    SizeOutOfRange {
        n: usize,
        min: usize,
        max: usize,
        what: &'static str,
    },

    #[error("invalid vertex set for K_{n}: {reason}")]
    InvalidCut { n: usize, reason: &'static str },

    #[error("r = {0} must be a finite positive number")]
    InvalidR(f64),

    #[error("weight overflows f64 for n = {n}, r = {r}; only log-space evaluation is available")]
    Overflow { n: usize, r: f64 },

    #[error("no sign change of the polynomial on [{low}, {high}]")]
    NoSignChange { low: f64, high: f64 },

    #[error("root finder did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("monotonicity check failed: {0}")]
    Monotonicity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
