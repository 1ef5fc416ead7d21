//! Laurent polynomials `C[z, 1/z]` with the substar involution
//! `f_*(z) = conj(f(1/conj(z)))`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{CmvError, Result};
use crate::scalar::{Scalar, DEFAULT_ZERO_TOL};

/// A finitely supported map from integer degrees to coefficients.
///
/// Zero coefficients are never stored. For the float backend, coefficients
/// with `|c| <= tol * max|c|` are dropped on normalization.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<T: Scalar> {
    coeffs: BTreeMap<i64, T>,
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * z^degree`.
    pub fn monomial(c: T, degree: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        LaurentPoly { coeffs }
    }

    /// The variable `z`.
    pub fn z() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, T)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, T> = BTreeMap::new();
        for (d, c) in terms {
            match coeffs.get_mut(&d) {
                Some(acc) => acc.add_assign_ref(&c),
                None => {
                    coeffs.insert(d, c);
                }
            }
        }
        let mut p = LaurentPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        if T::EXACT {
            self.coeffs.retain(|_, c| !c.is_zero());
        } else {
            let scale = self.max_magnitude();
            self.coeffs
                .retain(|_, c| !c.is_zero() && !c.is_negligible(scale, DEFAULT_ZERO_TOL));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, degree: i64) -> T {
        self.coeffs.get(&degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &T)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    /// Lowest and highest degree with a nonzero coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::from_terms(self.terms().map(|(d, a)| (d, a.clone() * c.clone())))
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    /// `f_*(z) = conj(f(1/conj z))`: the coefficient of `z^d` moves to
    /// `z^-d` and is conjugated.
    pub fn substar(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (-d, c.conj())).collect(),
        }
    }

    /// Formal derivative; `z^d -> d z^(d-1)` for every integer `d`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms()
                .filter(|(d, _)| *d != 0)
                .map(|(d, c)| (d - 1, c.clone() * T::from_i64(d))),
        )
    }

    pub fn nth_derivative(&self, k: usize) -> Self {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.derivative();
        }
        out
    }

    /// `sum_d c_d z^d`.
    pub fn eval(&self, z: &T) -> Result<T> {
        if z.is_zero() {
            return match self.support() {
                Some((lo, _)) if lo < 0 => Err(CmvError::ZeroArgument),
                _ => Ok(self.coeff(0)),
            };
        }
        let inv = T::one() / z.clone();
        let mut acc = T::zero();
        for (d, c) in self.terms() {
            let base = if d >= 0 { z } else { &inv };
            acc.add_prod(c, &pow(base, d.unsigned_abs()));
        }
        Ok(acc)
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let mut coeffs: BTreeMap<i64, T> = BTreeMap::new();
        for (da, a) in self.terms() {
            for (db, b) in other.terms() {
                coeffs
                    .entry(da + db)
                    .or_insert_with(T::zero)
                    .add_prod(a, b);
            }
        }
        let mut p = LaurentPoly { coeffs };
        p.normalize();
        p
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(d, c)| (d, c.clone())),
        )
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(d, c)| (d, c.clone()))
                .chain(other.terms().map(|(d, c)| (d, -c.clone()))),
        )
    }
}

pub(crate) fn pow<T: Scalar>(base: &T, e: u64) -> T {
    let mut acc = T::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        e >>= 1;
    }
    acc
}

impl<T: Scalar> Add for LaurentPoly<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.add_ref(&o)
    }
}

impl<T: Scalar> Sub for LaurentPoly<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.sub_ref(&o)
    }
}

impl<T: Scalar> Mul for LaurentPoly<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<T: Scalar> Neg for LaurentPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.into_iter().map(|(d, c)| (d, -c)).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: Scalar> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (d, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{d}")?,
            }
        }
        Ok(())
    }
}
