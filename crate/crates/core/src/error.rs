use std::fmt;

use num_complex::Complex64;

/// An eigenpair certifying that some Hermitian matrix fails to be PSD
/// (or, more generally, a most-negative direction of a difference).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub eigenvalue: f64,
    pub vector: Vec<Complex64>,
}

/// Which hypothesis of an order statement failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `A >= B` in the Loewner order.
    Dominates,
    /// `B >= 0`.
    LowerPsd,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Dominates => f.write_str("A >= B"),
            Hypothesis::LowerPsd => f.write_str("B >= 0"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: |M - M*|_F = {residual:e} exceeds {bound:e}")]
    NotHermitian { residual: f64, bound: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {:e}", .witness.eigenvalue)]
    NotPsd { witness: Witness },

    #[error("matrices do not commute: |XY - YX|_F = {norm:e} exceeds {bound:e}")]
    NotCommuting { norm: f64, bound: f64 },

    #[error("singular matrix encountered during iteration")]
    SingularIteration,

    #[error("hypothesis {hypothesis} violated: eigenvalue {:e}", .witness.eigenvalue)]
    HypothesisViolated {
        hypothesis: Hypothesis,
        witness: Witness,
    },

    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("congruence factor is singular")]
    SingularP,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
