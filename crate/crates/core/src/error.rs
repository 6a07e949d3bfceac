use alloc::string::String;

use crate::mesh::CellKind;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("no quadrature rule of degree {degree} (supported up to {max})")]
    UnsupportedQuadratureDegree { degree: usize, max: usize },

    #[error("{method} requires a {expected} mesh")]
    WrongCellKind { method: &'static str, expected: CellKind },

    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular factorization at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("iterative solver stalled after {iterations} iterations (relative residual {residual:e})")]
    IterativeSolverStalled { iterations: usize, residual: f64 },

    #[error("tabulated basis derivatives disagree with finite differences on cell {cell}")]
    DerivativeMismatch { cell: usize },

    #[error("exact solution is singular at the re-entrant corner")]
    CornerEvaluation,

    #[error("norm of the exact {what} is zero")]
    ZeroExactNorm { what: &'static str },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
