//! Scalar backends.
//!
//! Every algorithm in the crate is generic over [`Scalar`], a complex field
//! with an attached real subfield [`RealScalar`]. Two backends ship:
//!
//! - [`ExactComplex`]: Gaussian rationals, a pair of arbitrary-precision
//!   rationals. Arithmetic is exact, so zero tests and nullspace dimensions
//!   are decided without tolerances.
//! - [`FloatComplex`]: `num_complex::Complex64`. Zero tests compare against a
//!   caller-supplied scale times a [`Tolerance`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::RealLinalg;

/// Rational numbers used by the exact backend.
pub type Rational = BigRational;

/// Floating-point complex scalars.
pub type FloatComplex = Complex64;

/// Default zero tolerance for the float backend.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Default relative rank threshold for float nullspaces.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Zero and rank tolerances used by the float backend. The exact backend
/// ignores both.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// An entry `s` counts as zero when `|s| <= zero * scale`.
    pub zero: f64,
    /// A singular value counts as zero when `sigma <= rank * sigma_max`.
    pub rank: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            zero: DEFAULT_ZERO_TOL,
            rank: DEFAULT_RANK_TOL,
        }
    }
}

/// The real subfield of a scalar backend.
pub trait RealScalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Exact conversion from a finite binary float.
    fn from_f64(x: f64) -> Self;
    /// Square root, if it exists in this field. Floats return `None` only for
    /// negative input; rationals also return `None` for non-squares.
    fn sqrt(&self) -> Option<Self>;
    /// Parses either a rational literal `p`, `p/q` or (float backend only) a
    /// decimal literal.
    fn parse_literal(s: &str) -> Option<Self>;
    /// Canonical text form: `p/q` (or `p`) for rationals, shortest
    /// round-trip decimal for floats.
    fn to_literal(&self) -> String;
}

/// A complex scalar backend.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    type Real: RealLinalg;

    /// True for backends whose arithmetic is exact.
    const EXACT: bool;
    /// Short backend name used in reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn conj(&self) -> Self;
    /// Exact zero test (bitwise zero for floats).
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    /// `self += a * b` without intermediate clones where the backend allows.
    fn add_prod(&mut self, a: &Self, b: &Self);
    fn add_assign_ref(&mut self, a: &Self);

    fn from_real(r: Self::Real) -> Self {
        Self::from_parts(r, Self::Real::zero())
    }

    fn from_i64(n: i64) -> Self {
        Self::from_real(Self::Real::from_i64(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_real(Self::Real::from_ratio(num, den))
    }

    /// `|s|^2 = s * conj(s)` in the real subfield.
    fn norm_sqr(&self) -> Self::Real {
        let (re, im) = (self.re(), self.im());
        re.clone() * re + im.clone() * im
    }

    /// Zero test used by every `== 0` in the algorithms: exact backends test
    /// for exact zero, float backends test `|s| <= tol * scale`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale.max(f64::MIN_POSITIVE)
        }
    }

    fn is_real(&self) -> bool {
        self.im().is_zero()
    }
}

// ---------------------------------------------------------------------------
// Rationals

impl RealScalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let (n, d) = (self.numer(), self.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        if &(&rn * &rn) == n && &(&rd * &rd) == d {
            Some(BigRational::new(rn, rd))
        } else {
            None
        }
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p = BigInt::from_str(p.trim()).ok()?;
                let q = BigInt::from_str(q.trim()).ok()?;
                if Zero::is_zero(&q) {
                    None
                } else {
                    Some(BigRational::new(p, q))
                }
            }
            None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        }
    }

    fn to_literal(&self) -> String {
        self.to_string()
    }
}

impl RealScalar for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Self {
        x
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn parse_literal(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Some(r) = Rational::parse_literal(s) {
            return Some(RealScalar::to_f64(&r));
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite())
    }

    fn to_literal(&self) -> String {
        format!("{self:?}")
    }
}

// ---------------------------------------------------------------------------
// Exact complex

/// A Gaussian rational `re + i*im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: Rational,
    pub im: Rational,
}

impl ExactComplex {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    /// `(a/b) + i (c/d)`.
    pub fn from_ratios(a: i64, b: i64, c: i64, d: i64) -> Self {
        ExactComplex {
            re: Rational::from_ratio(a, b),
            im: Rational::from_ratio(c, d),
        }
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if Zero::is_zero(&self.im) && Zero::is_zero(&o.im) {
            return ExactComplex {
                re: &self.re * &o.re,
                im: Zero::zero(),
            };
        }
        ExactComplex {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else if Zero::is_zero(&self.re) {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for ExactComplex {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ExactComplex {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for ExactComplex {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ExactComplex {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for ExactComplex {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl Div for ExactComplex {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let den = &o.re * &o.re + &o.im * &o.im;
        assert!(!Zero::is_zero(&den), "division by zero");
        let num = self.mul_ref(&o.conj());
        ExactComplex {
            re: num.re / &den,
            im: num.im / den,
        }
    }
}

impl Neg for ExactComplex {
    type Output = Self;
    fn neg(self) -> Self {
        ExactComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Scalar for ExactComplex {
    type Real = Rational;
    const EXACT: bool = true;
    const NAME: &'static str = "exact";

    fn zero() -> Self {
        ExactComplex::default()
    }

    fn one() -> Self {
        ExactComplex {
            re: One::one(),
            im: Zero::zero(),
        }
    }

    fn i() -> Self {
        ExactComplex {
            re: Zero::zero(),
            im: One::one(),
        }
    }

    fn from_parts(re: Rational, im: Rational) -> Self {
        ExactComplex { re, im }
    }

    fn re(&self) -> Rational {
        self.re.clone()
    }

    fn im(&self) -> Rational {
        self.im.clone()
    }

    fn conj(&self) -> Self {
        ExactComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            RealScalar::to_f64(&self.re),
            RealScalar::to_f64(&self.im),
        )
    }

    fn add_prod(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(&a.im) && Zero::is_zero(&b.im) {
            self.re += &a.re * &b.re;
            return;
        }
        self.re += &a.re * &b.re - &a.im * &b.im;
        self.im += &a.re * &b.im + &a.im * &b.re;
    }

    fn add_assign_ref(&mut self, a: &Self) {
        self.re += &a.re;
        self.im += &a.im;
    }
}

// ---------------------------------------------------------------------------
// Float complex

impl Scalar for Complex64 {
    type Real = f64;
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_parts(re: f64, im: f64) -> Self {
        Complex64::new(re, im)
    }

    fn re(&self) -> f64 {
        self.re
    }

    fn im(&self) -> f64 {
        self.im
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn add_prod(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn add_assign_ref(&mut self, a: &Self) {
        *self += a;
    }
}

/// Parses a complex literal given as real and imaginary parts.
pub fn parse_complex<T: Scalar>(re: &str, im: &str) -> Option<T> {
    Some(T::from_parts(
        T::Real::parse_literal(re)?,
        T::Real::parse_literal(im)?,
    ))
}
