//! Exact arithmetic for Euclidean lattices given by rational Gram matrices.
//!
//! Everything here runs on arbitrary-precision rationals; there are no
//! floating-point code paths in any decision. Lattices are presented
//! abstractly by a symmetric positive definite Gram matrix, vectors are
//! integer coordinate columns in the implied basis, and every geometric
//! quantity (inner products, covolumes, slopes) is derived from the Gram
//! form alone.

pub mod error;
pub mod identities;
pub mod intmat;
pub mod lattice;
pub mod matrix;
pub mod multilinear;
pub mod rat;
pub mod stability;

pub use error::{LatError, Result};
pub use identities::{CheckKind, IdentityReport, TripleInvariants};
pub use intmat::{IntMatrix, SmithDecomposition};
pub use lattice::{LatVec, Lattice, SlopeExpr};
pub use matrix::RatMatrix;
pub use multilinear::{Decomposition, TensorElement};
pub use rat::{Int, Rat};
pub use stability::{
    CorankReduction, CorollaryCheck, MinCovol, MuMax, RankRecord, ReducedTriple,
    StabilityVerdict, TheoremCheck, VerdictKind,
};
