use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gram matrix is not symmetric")]
    NotSymmetric,
    #[error("sublattice basis rows are linearly dependent")]
    DependentBasis,
    #[error("ambient form is degenerate")]
    DegenerateAmbient,
    #[error("sublattice is not primitive")]
    NotPrimitive,

    #[error("matrix does not square to the identity")]
    NotInvolution,
    #[error("matrix does not preserve the bilinear form")]
    NotIsometry,
    #[error("operation requires the K3 lattice (rank 22, even, unimodular, signature (3,19))")]
    WrongAmbient,
    #[error("involution is not K3-admissible: invariant form has inertia {0}")]
    NotAdmissible(String),
    #[error("vector is not anti-invariant")]
    NotAntiInvariant,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("invalid real invariants: {0}")]
    InvalidRealInvariants(String),

    #[error("no decomposition or witness found with search bound {bound}; try a larger bound")]
    SearchExhausted { bound: usize },
    #[error("M-surfaces (lambda = 0) admit no full-rank witness")]
    MSurfaceExcluded,
    #[error("k = {k} is outside the admissible range: {reason}")]
    RangeViolation { k: usize, reason: String },
    #[error("invalid polarization: {0}")]
    PolarizationInvalid(String),
    #[error("invalid hyperbolic shift input: {0}")]
    InvalidShift(String),

    #[error("invalid obstruction input: {0}")]
    InvalidObstructionInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}
