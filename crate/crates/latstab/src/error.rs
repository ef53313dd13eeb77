use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    RankDeficient,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("generators do not span a saturated sublattice")]
    NotSaturated,
    #[error("orthogonal complement is trivial")]
    EmptyComplement,
    #[error("the zero element has no decomposition")]
    ZeroElement,
    #[error("invalid rational literal: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, LatError>;
