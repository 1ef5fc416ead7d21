#![allow(dead_code)]

pub mod chains;
pub mod tables;

use cmv_core::scalar::RealScalar;
use cmv_core::verblunsky::pythagorean;
use cmv_core::{BandMatrix, ExactComplex, Scalar, VerblunskySeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = ExactComplex;

pub fn q(a: i64, b: i64) -> Q {
    Q::from_ratio(a, b)
}

/// Small complex rational with parts `p/q`, `|p| <= 4`, `q <= 3`.
pub fn small<T: Scalar>(rng: &mut impl Rng) -> T {
    let mut part = || T::Real::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
    let re = part();
    let im = part();
    T::from_parts(re, im)
}

/// A band operator whose entry `(i, j)` depends only on `(seed, i, j)`, so
/// windows of different sizes describe the same infinite operator.
pub fn band_operator<T: Scalar>(window: usize, lower: usize, upper: usize, seed: u64) -> BandMatrix<T> {
    BandMatrix::random(window, lower, upper, seed)
}

/// A Hermitian band operator, again independent of the window.
pub fn hermitian_operator<T: Scalar>(window: usize, band: usize, seed: u64) -> BandMatrix<T> {
    BandMatrix::random_hermitian(window, band, seed)
}

/// A real diagonal operator.
pub fn real_diagonal<T: Scalar>(window: usize, seed: u64) -> BandMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BandMatrix::from_diagonal(
        (0..window)
            .map(|_| T::from_real(T::Real::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=3))))
            .collect(),
    )
}

pub fn three_fifths() -> VerblunskySeq<Q> {
    VerblunskySeq::constant(q(3, 5)).unwrap()
}

/// The complex Pythagorean value `(4/5)(3 + 4i)/5`.
pub fn complex_value() -> Q {
    pythagorean(1, 2, 3, 4, 5)
}

/// A randomized `(α, Ω, n)` for the identity suite: a Pythagorean list, a
/// general (non-Hermitian) band `Ω` and `1 <= n <= 4`.
pub fn identity_instance(seed: u64, window: usize) -> (VerblunskySeq<Q>, BandMatrix<Q>, usize) {
    let alpha = VerblunskySeq::random_pythagorean(10, seed);
    let band = (seed % 3) as usize;
    let omega = band_operator(window, band, (seed / 3 % 3) as usize, seed);
    let n = 1 + (seed % 4) as usize;
    (alpha, omega, n)
}
