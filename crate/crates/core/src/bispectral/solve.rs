//! The linear system `(ad_n C)Ω = 0` over the real parameters of a patterned
//! Hermitian unknown, and its nullspace.

use std::collections::BTreeMap;

use crate::ad::{hermitian_ad_recursive, hermitian_ad_with, scale_of};
use crate::band::BandMatrix;
use crate::cmv::{build_cmv, lebesgue_solution, CmvPair};
use crate::error::{CmvError, Result};
use crate::linalg::{in_span, RealLinalg, SparseRow};
use crate::scalar::{FloatComplex, RealScalar, Scalar, Tolerance};
use crate::verblunsky::VerblunskySeq;

use super::pattern::{Param, SolvePattern};

/// Real and imaginary parts of the trusted, clean entries of
/// `(ad_n C)Ω` as linear forms in the pattern parameters.
#[derive(Clone, Debug)]
pub struct LinearSystem<T: Scalar> {
    pub pattern: SolvePattern,
    pub order: usize,
    pub window: usize,
    pub params: Vec<Param>,
    /// Harvested entries `(i, j)`, `i <= j`.
    pub positions: Vec<(usize, usize)>,
    /// One real row per position, plus an imaginary row for `i < j`.
    pub rows: Vec<SparseRow<T::Real>>,
    /// Horizon of the parameter images.
    pub horizon: usize,
    pub alpha: VerblunskySeq<T>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn unknowns(&self) -> usize {
        self.params.len()
    }

    pub fn equations(&self) -> usize {
        self.rows.len()
    }

    /// Applies the system to a parameter vector.
    pub fn apply(&self, values: &[T::Real]) -> Vec<T::Real> {
        self.rows
            .iter()
            .map(|r| {
                r.iter().fold(T::Real::zero(), |acc, (c, v)| {
                    acc + v.clone() * values[*c].clone()
                })
            })
            .collect()
    }

    /// The parameters of `Ω` in this system's pattern.
    pub fn params_of(&self, omega: &BandMatrix<T>) -> Vec<T::Real> {
        self.pattern.params_of(omega)
    }
}

fn too_small(reason: String) -> CmvError {
    CmvError::WindowTooSmall { reason }
}

/// Entries of `(ad_n C)X` that can depend on the diagonal of `X` at indices
/// `from..window`. Computed on magnitudes, so exact cancellation never hides
/// a dependence.
fn tail_reach<T: Scalar>(pair: &CmvPair<T>, from: usize, n: usize) -> Result<BandMatrix<FloatComplex>> {
    let abs = |m: &BandMatrix<T>| {
        BandMatrix::<FloatComplex>::from_fn(m.window(), m.lower(), m.upper(), |i, j| {
            FloatComplex::new(m.get(i, j).magnitude(), 0.0)
        })
    };
    let (l, m) = (abs(&pair.l), abs(&pair.m));
    let (lt, mt) = (l.transpose(), m.transpose());
    let w = pair.window();
    let mut x = BandMatrix::<FloatComplex>::from_diagonal(
        (0..w)
            .map(|k| FloatComplex::new(if k >= from { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    );
    for j in 0..n {
        let (a, b) = if j % 2 == 0 { (&m, &lt) } else { (&l, &mt) };
        let (at, bt) = if j % 2 == 0 { (&mt, &l) } else { (&lt, &m) };
        x = a.mul(&x)?.mul(at)?.add(&b.mul(&x)?.mul(bt)?)?;
    }
    Ok(x)
}

/// Builds the system for `(ad_n C)Ω = 0` with `Ω` in `pattern`, computed on a
/// window of size `window`.
///
/// Parameters at or beyond `pattern.size` are unknown on the diagonal and
/// zero off it; equations touching the unknown diagonal tail are dropped.
pub fn assemble_system<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    n: usize,
    pattern: SolvePattern,
    window: usize,
) -> Result<LinearSystem<T>> {
    if n == 0 {
        return Err(CmvError::InvalidPattern("order must be at least 1".into()));
    }
    let size = pattern.size;
    let head = pattern.head();
    if pattern.is_tridiagonal() && size < 4 * n + head + 8 {
        return Err(too_small(format!(
            "tridiagonal pattern of order {n} with head {head} needs size >= {}, got {size}",
            4 * n + head + 8
        )));
    }
    let reach = 2 * n + 1;
    if window < size + reach + 2 {
        return Err(too_small(format!(
            "window {window} must be at least size + 2n + 3 = {}",
            size + reach + 2
        )));
    }

    let pair = build_cmv(alpha, window)?;
    let params = pattern.params();
    let images = params
        .iter()
        .map(|&p| hermitian_ad_recursive(&pair, &pattern.unit::<T>(p, window), n))
        .collect::<Result<Vec<_>>>()?;
    let horizon = images.iter().map(|m| m.horizon()).min().unwrap_or(0);
    if horizon <= size + n {
        return Err(too_small(format!(
            "horizon {horizon} does not cover the unknowns (size {size}, order {n})"
        )));
    }

    let dirty = tail_reach(&pair, size, n)?;
    let band = 2 * n + pattern.bandwidth();
    let mut positions = Vec::new();
    for i in 0..(size + n).min(horizon) {
        for j in i..(i + band + 1).min(horizon) {
            if dirty.get(i, j).re == 0.0 {
                positions.push((i, j));
            }
        }
    }

    let mut rows = Vec::new();
    for &(i, j) in &positions {
        let mut re: SparseRow<T::Real> = Vec::new();
        let mut im: SparseRow<T::Real> = Vec::new();
        for (c, img) in images.iter().enumerate() {
            let v = img.get(i, j);
            if !v.re().is_zero() {
                re.push((c, v.re()));
            }
            if !v.im().is_zero() {
                im.push((c, v.im()));
            }
        }
        rows.push(re);
        if i < j {
            rows.push(im);
        }
    }
    if rows.len() < 2 * params.len() {
        return Err(too_small(format!(
            "{} equations for {} unknowns; need at least twice as many",
            rows.len(),
            params.len()
        )));
    }
    rows.retain(|r| !r.is_empty());

    Ok(LinearSystem {
        pattern,
        order: n,
        window,
        params,
        positions,
        rows,
        horizon,
        alpha: alpha.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Only multiples of the identity.
    Trivial,
    /// The span contains both `I` and `diag(0, -1, 1, -2, 2, ...)`.
    LebesgueType,
    Other,
}

#[derive(Clone, Debug)]
pub struct SolutionBasis<T: Scalar> {
    pub pattern: SolvePattern,
    pub order: usize,
    /// Solutions on rows and columns `0..pattern.size`.
    pub basis: Vec<BandMatrix<T>>,
    pub params: Vec<Vec<T::Real>>,
    pub dimension: usize,
    pub classification: Classification,
}

impl<T: Scalar> SolutionBasis<T> {
    /// Whether `Ω` (read through the pattern) lies in the solution span.
    pub fn contains(&self, omega: &BandMatrix<T>, tol: &Tolerance) -> Result<bool> {
        in_span(&self.params, &self.pattern.params_of(omega), tol)
    }
}

/// The kernel of `system`, re-verified element by element and classified.
pub fn nullspace<T: Scalar>(system: &LinearSystem<T>, tol: &Tolerance) -> Result<SolutionBasis<T>> {
    let params = T::Real::nullspace(&system.rows, system.unknowns(), tol)?;
    let pattern = system.pattern;
    let n = system.order;
    let size = pattern.size;

    // Rebuilt on a window of `size`, the horizon only trusts entries that do
    // not see beyond the unknowns.
    let check_pair = build_cmv(&system.alpha, size)?;
    let mut basis = Vec::with_capacity(params.len());
    for (idx, v) in params.iter().enumerate() {
        let omega = pattern.matrix::<T>(v, size);
        let image = hermitian_ad_with(&check_pair, &omega, n, tol)?;
        let scale = scale_of(&[&omega]) * (1u64 << (2 * n).min(60)) as f64;
        if !image.is_zero_with(tol, scale) {
            return Err(CmvError::VerificationFailed(format!(
                "basis element {idx} does not solve the order-{n} condition"
            )));
        }
        basis.push(omega);
    }

    let identity = pattern.params_of(&BandMatrix::<T>::identity(size));
    let lebesgue = pattern.params_of(&lebesgue_solution::<T>(size));
    let has_identity = in_span(&params, &identity, tol)?;
    let classification = if params.len() == 1 && has_identity {
        Classification::Trivial
    } else if has_identity && in_span(&params, &lebesgue, tol)? {
        Classification::LebesgueType
    } else {
        Classification::Other
    };

    Ok(SolutionBasis {
        pattern,
        order: n,
        dimension: basis.len(),
        basis,
        params,
        classification,
    })
}

/// Assembles and solves `(ad_n C)Ω = 0` for `Ω` in `pattern`.
pub fn solve<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    n: usize,
    pattern: SolvePattern,
    window: usize,
    tol: &Tolerance,
) -> Result<SolutionBasis<T>> {
    let system = assemble_system(alpha, n, pattern, window)?;
    nullspace(&system, tol)
}

/// Counts the harvested rows per diagonal offset, for diagnostics.
pub fn rows_per_offset<T: Scalar>(system: &LinearSystem<T>) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for &(i, j) in &system.positions {
        *out.entry(j - i).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bispectral::pattern::PatternKind;
    use crate::scalar::{ExactComplex, Rational};

    type Q = ExactComplex;

    fn diag(size: usize) -> SolvePattern {
        SolvePattern::new(PatternKind::Diagonal, size).unwrap()
    }

    #[test]
    fn identity_has_zero_image() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(6, 3);
        for kind in [
            PatternKind::Diagonal,
            PatternKind::AlmostDiagonal { head: 3 },
            PatternKind::Tridiagonal,
            PatternKind::AlmostTridiagonal { head: 2 },
        ] {
            let p = SolvePattern::new(kind, 24).unwrap();
            let sys = assemble_system(&alpha, 2, p, 40).unwrap();
            let id = sys.params_of(&BandMatrix::identity(24));
            assert!(sys.apply(&id).iter().all(|v| v.is_zero()), "{kind}");
        }
    }

    #[test]
    fn superposition() {
        let alpha = VerblunskySeq::constant(Q::from_ratio(3, 5)).unwrap();
        let sys = assemble_system(&alpha, 2, diag(16), 32).unwrap();
        let a: Vec<Rational> = (0..16).map(|k| Rational::new((k * k % 7).into(), 3.into())).collect();
        let b: Vec<Rational> = (0..16).map(|k| Rational::new((k as i64 - 5).into(), 2.into())).collect();
        let sum: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let (ia, ib, is) = (sys.apply(&a), sys.apply(&b), sys.apply(&sum));
        for k in 0..is.len() {
            assert_eq!(is[k], &ia[k] + &ib[k]);
        }
    }

    #[test]
    fn lebesgue_point_order_two() {
        let s = solve(&VerblunskySeq::<Q>::zero(), 2, diag(24), 64, &Tolerance::default()).unwrap();
        assert_eq!(s.dimension, 2);
        assert_eq!(s.classification, Classification::LebesgueType);
    }

    #[test]
    fn nonzero_alpha_is_trivial() {
        let alpha = VerblunskySeq::constant(Q::from_ratio(3, 5)).unwrap();
        let s = solve(&alpha, 2, diag(24), 64, &Tolerance::default()).unwrap();
        assert_eq!(s.dimension, 1);
        assert_eq!(s.classification, Classification::Trivial);
    }

    #[test]
    fn small_window_rejected() {
        let r = assemble_system(&VerblunskySeq::<Q>::zero(), 2, diag(24), 26);
        assert!(matches!(r, Err(CmvError::WindowTooSmall { .. })));
        let tri = SolvePattern::new(PatternKind::Tridiagonal, 10).unwrap();
        let r = assemble_system(&VerblunskySeq::<Q>::zero(), 2, tri, 64);
        assert!(matches!(r, Err(CmvError::WindowTooSmall { .. })));
    }
}
