//! Fixtures shared by the benchmarks.

use cmv_core::{build_cmv, BandMatrix, CmvPair, ExactComplex, FloatComplex, PatternKind, Scalar, SolvePattern, VerblunskySeq};

pub type Q = ExactComplex;

pub fn exact_pair(window: usize) -> CmvPair<Q> {
    build_cmv(&VerblunskySeq::random_pythagorean(16, 7), window).expect("window >= 4")
}

pub fn float_pair(window: usize) -> CmvPair<FloatComplex> {
    let alpha = VerblunskySeq::<Q>::random_pythagorean(16, 7).to_float();
    build_cmv(&alpha, window).expect("window >= 4")
}

/// `diag(1, 2, 3, ...)`.
pub fn ramp(window: usize) -> BandMatrix<Q> {
    BandMatrix::from_diagonal((1..=window as i64).map(Q::from_i64).collect())
}

pub fn diagonal_pattern(size: usize) -> SolvePattern {
    SolvePattern::new(PatternKind::Diagonal, size).expect("nonzero size")
}
