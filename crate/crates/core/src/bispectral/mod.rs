//! Solving `(ad_n C)Ω = 0` for patterned Hermitian `Ω`, reconstructing the
//! matching differential operator, and certifying the generalized
//! eigenvector basis of `C`.

mod kernel;
mod pattern;
mod reconstruct;
mod solve;

pub use crate::cmv::lebesgue_solution;
pub use kernel::{
    delta_closed_form, gamma_closed_form, k_factor, tridiagonal_tail, verify_kernel_basis, KernelCheckReport,
};
pub use pattern::{Param, PatternKind, SolvePattern};
pub use reconstruct::{operator_matrix, reconstruct_operator};
pub use solve::{
    assemble_system, nullspace, rows_per_offset, solve, Classification, LinearSystem, SolutionBasis,
};
