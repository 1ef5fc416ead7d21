//! CMV matrices and their two-factor decomposition `C = LM`, `Ct = ML`.

use crate::band::BandMatrix;
use crate::error::{CmvError, Result};
use crate::scalar::{Scalar, Tolerance};
use crate::verblunsky::VerblunskySeq;

/// The symmetric unitary block `[[conj(a), rho], [rho, -a]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaBlock<T: Scalar>(pub [[T; 2]; 2]);

impl<T: Scalar> ThetaBlock<T> {
    pub fn is_symmetric(&self) -> bool {
        self.0[0][1] == self.0[1][0]
    }

    /// `Θ Θ† = I`, exactly or within `tol.zero`.
    pub fn is_unitary(&self, tol: &Tolerance) -> bool {
        let m = &self.0;
        (0..2).all(|i| {
            (0..2).all(|j| {
                let mut s = T::zero();
                for (a, b) in m[i].iter().zip(&m[j]) {
                    s.add_prod(a, &b.conj());
                }
                let target = if i == j { T::one() } else { T::zero() };
                (s - target).is_negligible(1.0, tol.zero)
            })
        })
    }
}

pub fn theta<T: Scalar>(alpha: &VerblunskySeq<T>, k: usize) -> ThetaBlock<T> {
    let a = alpha.alpha(k);
    let r = alpha.rho(k);
    ThetaBlock([[a.conj(), r.clone()], [r, -a]])
}

/// `L`, `M` and their shift decompositions
/// `L = A_e + B_e S + S† B_e`, `M = A_o + B_o S + S† B_o`.
#[derive(Clone, Debug)]
pub struct CmvFactors<T: Scalar> {
    pub l: BandMatrix<T>,
    pub m: BandMatrix<T>,
    pub a_e: BandMatrix<T>,
    pub b_e: BandMatrix<T>,
    pub a_o: BandMatrix<T>,
    pub b_o: BandMatrix<T>,
}

/// Writes `Θ_k` at rows/columns `start, start+1`, clipped to the window.
fn place_block<T: Scalar>(m: &mut BandMatrix<T>, start: usize, t: ThetaBlock<T>) {
    let n = m.window();
    for (di, row) in t.0.into_iter().enumerate() {
        for (dj, v) in row.into_iter().enumerate() {
            let (i, j) = (start + di, start + dj);
            if i < n && j < n {
                m.set(i, j, v);
            }
        }
    }
}

pub fn build_factors<T: Scalar>(alpha: &VerblunskySeq<T>, window: usize) -> Result<CmvFactors<T>> {
    if window < 2 {
        return Err(CmvError::WindowTooSmall {
            reason: format!("factors need window >= 2, got {window}"),
        });
    }
    let coeffs = alpha.coefficients(window);
    let mut l = BandMatrix::zeros(window, 1, 1);
    let mut m = BandMatrix::zeros(window, 1, 1);
    m.set(0, 0, T::one());
    // Θ_k occupies rows k, k+1: even k in L, odd k in M.
    for k in 0..window {
        let t = theta(alpha, k);
        let target = if k % 2 == 0 { &mut l } else { &mut m };
        place_block(target, k, t);
    }

    let a_e: Vec<T> = (0..window)
        .map(|i| {
            if i % 2 == 0 {
                coeffs[i].0.conj()
            } else {
                -coeffs[i - 1].0.clone()
            }
        })
        .collect();
    let b_e: Vec<T> = (0..window)
        .map(|i| if i % 2 == 0 { coeffs[i].1.clone() } else { T::zero() })
        .collect();
    let a_o: Vec<T> = (0..window)
        .map(|i| match i {
            0 => T::one(),
            _ if i % 2 == 1 => coeffs[i].0.conj(),
            _ => -coeffs[i - 1].0.clone(),
        })
        .collect();
    let b_o: Vec<T> = (0..window)
        .map(|i| if i % 2 == 1 { coeffs[i].1.clone() } else { T::zero() })
        .collect();

    Ok(CmvFactors {
        l,
        m,
        a_e: BandMatrix::from_diagonal(a_e),
        b_e: BandMatrix::from_diagonal(b_e),
        a_o: BandMatrix::from_diagonal(a_o),
        b_o: BandMatrix::from_diagonal(b_o),
    })
}

/// A CMV matrix together with its transpose and factors on one window.
///
/// `C(k)` selects `C` for even `k` and `Ct` for odd `k`. A pair built by
/// [`CmvPair::transposed`] describes `Ct = ML`, whose eigenvectors are the
/// `χ_n` rather than the `x_n`.
#[derive(Clone, Debug)]
pub struct CmvPair<T: Scalar> {
    pub c: BandMatrix<T>,
    pub ct: BandMatrix<T>,
    pub l: BandMatrix<T>,
    pub m: BandMatrix<T>,
    pub alpha: VerblunskySeq<T>,
    pub flipped: bool,
}

impl<T: Scalar> CmvPair<T> {
    pub fn new(alpha: &VerblunskySeq<T>, window: usize) -> Result<Self> {
        build_cmv(alpha, window)
    }

    pub fn window(&self) -> usize {
        self.c.window()
    }

    /// `C` for even `k`, `Ct` for odd `k`.
    pub fn c_parity(&self, k: usize) -> &BandMatrix<T> {
        if k.is_multiple_of(2) {
            &self.c
        } else {
            &self.ct
        }
    }

    /// The pair describing `Ct = ML`: roles of `C`/`Ct` and `L`/`M` swap.
    pub fn transposed(&self) -> Self {
        CmvPair {
            c: self.ct.clone(),
            ct: self.c.clone(),
            l: self.m.clone(),
            m: self.l.clone(),
            alpha: self.alpha.clone(),
            flipped: !self.flipped,
        }
    }

    /// The pair for `C(k)`.
    pub fn parity(&self, k: usize) -> Self {
        if k.is_multiple_of(2) {
            self.clone()
        } else {
            self.transposed()
        }
    }
}

pub fn build_cmv<T: Scalar>(alpha: &VerblunskySeq<T>, window: usize) -> Result<CmvPair<T>> {
    if window < 4 {
        return Err(CmvError::WindowTooSmall {
            reason: format!("CMV matrix needs window >= 4, got {window}"),
        });
    }
    let f = build_factors(alpha, window)?;
    let c = f.l.mul(&f.m)?;
    let ct = f.m.mul(&f.l)?;
    Ok(CmvPair {
        c,
        ct,
        l: f.l,
        m: f.m,
        alpha: alpha.clone(),
        flipped: false,
    })
}

/// `Λ_Leb = diag(0, -1, 1, -2, 2, ...)`, the eigenvalues of `z d/dz` on the
/// Lebesgue OLP basis `1, z^-1, z, z^-2, z^2, ...`.
pub fn lebesgue_solution<T: Scalar>(size: usize) -> BandMatrix<T> {
    BandMatrix::from_diagonal((0..size).map(|k| T::from_i64(lebesgue_eigenvalue(k))).collect())
}

/// `λ_{2m} = m`, `λ_{2m-1} = -m`.
pub fn lebesgue_eigenvalue(k: usize) -> i64 {
    let k = k as i64;
    if k % 2 == 0 {
        k / 2
    } else {
        -(k + 1) / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, FloatComplex};
    use crate::verblunsky::pythagorean;

    type Q = ExactComplex;

    fn q(a: i64, b: i64) -> Q {
        Q::from_ratio(a, b)
    }

    #[test]
    fn theta_examples() {
        let z = VerblunskySeq::<Q>::zero();
        assert_eq!(theta(&z, 3).0, [[q(0, 1), q(1, 1)], [q(1, 1), q(0, 1)]]);
        let s = VerblunskySeq::constant(q(3, 5)).unwrap();
        assert_eq!(theta(&s, 0).0, [[q(3, 5), q(4, 5)], [q(4, 5), q(-3, 5)]]);
        let f = VerblunskySeq::constant(FloatComplex::new(0.0, 0.5)).unwrap();
        let t = theta(&f, 0);
        let r3 = 3f64.sqrt() / 2.0;
        assert!((t.0[0][0] - FloatComplex::new(0.0, -0.5)).norm() < 1e-15);
        assert!((t.0[0][1] - FloatComplex::new(r3, 0.0)).norm() < 1e-15);
        assert!((t.0[1][1] - FloatComplex::new(0.0, -0.5)).norm() < 1e-15);
        assert!(t.is_symmetric() && t.is_unitary(&Tolerance::default()));
    }

    #[test]
    fn zero_alpha_factors() {
        let f = build_factors(&VerblunskySeq::<Q>::zero(), 8).unwrap();
        assert!(f.a_e.is_zero());
        assert_eq!(f.b_e.diagonal(0), [1, 0, 1, 0, 1, 0, 1, 0].map(|v| q(v, 1)).to_vec());
    }

    #[test]
    fn shift_decomposition_reproduces_factors() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(9, 11);
        let n = 12;
        let f = build_factors(&alpha, n).unwrap();
        let s = BandMatrix::shift(n);
        for (full, a, b) in [(&f.l, &f.a_e, &f.b_e), (&f.m, &f.a_o, &f.b_o)] {
            let rebuilt = a
                .add(&b.mul(&s).unwrap())
                .unwrap()
                .add(&s.dagger().mul(b).unwrap())
                .unwrap();
            for i in 0..n - 1 {
                for j in 0..n - 1 {
                    assert_eq!(rebuilt.get(i, j), full.get(i, j), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn m_row_zero_is_unit() {
        let alpha = VerblunskySeq::constant(pythagorean::<Q>(1, 2, 3, 4, 5)).unwrap();
        let f = build_factors(&alpha, 6).unwrap();
        assert_eq!(f.m.get(0, 0), Q::one());
        assert!((1..6).all(|j| f.m.get(0, j).is_zero()));
    }

    #[test]
    fn zero_alpha_cmv_rows() {
        let p = build_cmv(&VerblunskySeq::<Q>::zero(), 10).unwrap();
        let row = |i: usize| (0..6).map(|j| p.c.get(i, j)).collect::<Vec<_>>();
        assert_eq!(row(0), [0, 0, 1, 0, 0, 0].map(|v| q(v, 1)).to_vec());
        assert_eq!(row(1), [1, 0, 0, 0, 0, 0].map(|v| q(v, 1)).to_vec());
        assert_eq!(p.c.diagonal(2)[..6], [1, 0, 1, 0, 1, 0].map(|v| q(v, 1)));
    }

    #[test]
    fn transpose_relation() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(8, 5);
        let p = build_cmv(&alpha, 14).unwrap();
        assert!(p.ct.sub(&p.c.transpose()).unwrap().is_zero());
    }

    #[test]
    fn lebesgue_diagonal() {
        let l = lebesgue_solution::<Q>(5);
        assert_eq!(l.diagonal(0), [0, -1, 1, -2, 2].map(|v| q(v, 1)).to_vec());
    }
}
