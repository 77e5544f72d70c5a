use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for dimension {dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("parse error at byte {position} in {input:?}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("operation requires exact polynomial coefficients")]
    NonExact,

    #[error("evaluation produced a non-finite value")]
    NonFinite,

    #[error("tensors live on different charts")]
    ChartMismatch,

    #[error("degree {p} + {q} exceeds chart dimension {n}")]
    DegreeOverflow { p: usize, q: usize, n: usize },

    #[error("expected {expected} Casimir functions, found {found}")]
    CasimirCount { expected: usize, found: usize },

    #[error("chart dimension {0} too small (need at least 3)")]
    ChartTooSmall(usize),

    #[error("conformal factor vanishes or changes sign on the domain (witness {witness:?})")]
    VanishingFactor { witness: Vec<f64> },

    #[error("conformal factor is not invariant under the involution")]
    NotInvolutionSymmetric,

    #[error("point is singular (rank {rank})")]
    SingularPoint { rank: usize },

    #[error("point lies within {distance:e} of the singular set")]
    NearSingular { distance: f64 },

    #[error("vector is not in the image of the anchor map (residual {residual:e})")]
    NotInImage { residual: f64 },

    #[error("vector is not tangent to the leaf (residual {residual:e})")]
    NotTangent { residual: f64 },

    #[error("invalid input: {0}")]
    Invalid(String),
}
