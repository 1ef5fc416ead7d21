//! CMV matrices, orthonormal Laurent polynomials, and the ad-condition
//! machinery that decides which CMV matrices admit a differential operator.
//!
//! Every computation runs on finite windows of infinite banded operators
//! (see [`band`]) over either exact Gaussian rationals or `f64` complex
//! numbers (see [`scalar`]).

pub mod ad;
pub mod band;
pub mod bispectral;
pub mod cmv;
pub mod diffop;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod olp;
pub mod scalar;
pub mod verblunsky;

pub use ad::{
    ad_cascade, ad_integrate, ad_power, centralizer_symbol, eval_at_operator, hermitian_ad, hermitian_relations_check,
    HermitianRelations, RelationCheck,
};
pub use band::BandMatrix;
pub use bispectral::{
    assemble_system, nullspace, operator_matrix, reconstruct_operator, solve, verify_kernel_basis, Classification,
    KernelCheckReport, LinearSystem, PatternKind, SolutionBasis, SolvePattern,
};
pub use cmv::{build_cmv, lebesgue_solution, CmvPair};
pub use diffop::DiffOperator;
pub use error::{CmvError, Result};
pub use laurent::LaurentPoly;
pub use olp::{compute_olp, gram_schmidt_oracle, moments, OlpPair};
pub use scalar::{ExactComplex, FloatComplex, Rational, Scalar, Tolerance};
pub use verblunsky::{VerblunskyKind, VerblunskySeq};
