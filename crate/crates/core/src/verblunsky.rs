//! Verblunsky coefficient sequences.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CmvError, Result};
use crate::scalar::{RealScalar, Scalar};

/// How the coefficients `alpha_n` are generated.
#[derive(Clone, Debug, PartialEq)]
pub enum VerblunskyKind<T: Scalar> {
    /// `alpha_n = 0` (Lebesgue measure).
    Zero,
    /// `alpha_n = c` for every `n`.
    Constant(T),
    /// `alpha_n = values[n]` for `n < values.len()`, zero afterwards.
    List(Vec<T>),
    /// `alpha_n = c * r^n`. Float backend only, since `rho_n` is generally
    /// irrational.
    Geometric { c: T, r: f64 },
}

/// A validated Verblunsky sequence. Every coefficient lies in the open unit
/// disk and, for the exact backend, has a rational `rho_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskySeq<T: Scalar> {
    kind: VerblunskyKind<T>,
}

impl<T: Scalar> VerblunskySeq<T> {
    pub fn zero() -> Self {
        VerblunskySeq {
            kind: VerblunskyKind::Zero,
        }
    }

    pub fn constant(c: T) -> Result<Self> {
        rho_of(&c, 0)?;
        Ok(VerblunskySeq {
            kind: VerblunskyKind::Constant(c),
        })
    }

    pub fn list(values: Vec<T>) -> Result<Self> {
        for (k, a) in values.iter().enumerate() {
            rho_of(a, k)?;
        }
        Ok(VerblunskySeq {
            kind: VerblunskyKind::List(values),
        })
    }

    pub fn geometric(c: T, r: f64) -> Result<Self> {
        if T::EXACT {
            return Err(CmvError::InvalidVerblunsky {
                index: 0,
                reason: "geometric sequences need the float backend".into(),
            });
        }
        if r.is_nan() || r.abs() > 1.0 {
            return Err(CmvError::InvalidVerblunsky {
                index: 1,
                reason: format!("ratio {r} must satisfy |r| <= 1"),
            });
        }
        rho_of(&c, 0)?;
        Ok(VerblunskySeq {
            kind: VerblunskyKind::Geometric { c, r },
        })
    }

    pub fn from_kind(kind: VerblunskyKind<T>) -> Result<Self> {
        match kind {
            VerblunskyKind::Zero => Ok(Self::zero()),
            VerblunskyKind::Constant(c) => Self::constant(c),
            VerblunskyKind::List(v) => Self::list(v),
            VerblunskyKind::Geometric { c, r } => Self::geometric(c, r),
        }
    }

    /// A list of `len` random Pythagorean coefficients (rational `alpha` and
    /// `rho`), reproducible from `seed`. At least one entry is nonzero.
    pub fn random_pythagorean(len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values: Vec<T> = (0..len)
            .map(|_| {
                if rng.gen_ratio(1, 5) {
                    T::zero()
                } else {
                    random_pythagorean_value(&mut rng)
                }
            })
            .collect();
        if len > 0 && values.iter().all(|v| v.is_zero()) {
            values[0] = random_pythagorean_value(&mut rng);
        }
        VerblunskySeq {
            kind: VerblunskyKind::List(values),
        }
    }

    /// The same sequence over `f64` complex numbers.
    pub fn to_float(&self) -> VerblunskySeq<crate::scalar::FloatComplex> {
        let kind = match &self.kind {
            VerblunskyKind::Zero => VerblunskyKind::Zero,
            VerblunskyKind::Constant(c) => VerblunskyKind::Constant(c.to_c64()),
            VerblunskyKind::List(v) => VerblunskyKind::List(v.iter().map(|a| a.to_c64()).collect()),
            VerblunskyKind::Geometric { c, r } => VerblunskyKind::Geometric { c: c.to_c64(), r: *r },
        };
        VerblunskySeq { kind }
    }

    pub fn kind(&self) -> &VerblunskyKind<T> {
        &self.kind
    }

    /// True iff every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        match &self.kind {
            VerblunskyKind::Zero => true,
            VerblunskyKind::Constant(c) | VerblunskyKind::Geometric { c, .. } => c.is_zero(),
            VerblunskyKind::List(v) => v.iter().all(|a| a.is_zero()),
        }
    }

    pub fn alpha(&self, n: usize) -> T {
        match &self.kind {
            VerblunskyKind::Zero => T::zero(),
            VerblunskyKind::Constant(c) => c.clone(),
            VerblunskyKind::List(v) => v.get(n).cloned().unwrap_or_else(T::zero),
            VerblunskyKind::Geometric { c, r } => {
                c.clone() * T::from_real(T::Real::from_f64(r.powi(n as i32)))
            }
        }
    }

    /// `rho_n = sqrt(1 - |alpha_n|^2)`, as a real scalar embedded in `T`.
    pub fn rho(&self, n: usize) -> T {
        rho_of(&self.alpha(n), n).expect("validated at construction")
    }

    /// The pairs `(alpha_n, rho_n)` for `n < count`.
    pub fn coefficients(&self, count: usize) -> Vec<(T, T)> {
        (0..count)
            .map(|n| {
                let a = self.alpha(n);
                let r = rho_of(&a, n).expect("validated at construction");
                (a, r)
            })
            .collect()
    }
}

/// `sqrt(1 - |a|^2)` inside the backend's real field.
pub fn rho_of<T: Scalar>(a: &T, index: usize) -> Result<T> {
    let one = <T::Real as RealScalar>::one();
    let s = one - a.norm_sqr();
    if s <= <T::Real as RealScalar>::zero() {
        return Err(CmvError::InvalidVerblunsky {
            index,
            reason: format!("|alpha| must be < 1, got alpha = {a}"),
        });
    }
    match s.sqrt() {
        Some(r) => Ok(T::from_real(r)),
        None => Err(CmvError::InvalidVerblunsky {
            index,
            reason: format!("1 - |alpha|^2 = {s} has no exact square root; use a Pythagorean value"),
        }),
    }
}

/// Unit directions with rational coordinates.
const UNITS: [(i64, i64, i64); 12] = [
    (1, 0, 1),
    (-1, 0, 1),
    (0, 1, 1),
    (0, -1, 1),
    (3, 4, 5),
    (4, 3, 5),
    (3, -4, 5),
    (-4, 3, 5),
    (-3, -4, 5),
    (5, 12, 13),
    (-12, 5, 13),
    (8, -15, 17),
];

/// `alpha = 2t/(1+t^2) * u` with `u` a rational unit and `0 < t < 1`, so that
/// `rho = (1-t^2)/(1+t^2)` is rational.
fn random_pythagorean_value<T: Scalar, R: Rng>(rng: &mut R) -> T {
    let den = rng.gen_range(2..=6i64);
    let num = rng.gen_range(1..den);
    let (ux, uy, uz) = UNITS[rng.gen_range(0..UNITS.len())];
    pythagorean(num, den, ux, uy, uz)
}

/// The coefficient `2t/(1+t^2) * (ux + i uy)/uz` with `t = num/den`.
pub fn pythagorean<T: Scalar>(num: i64, den: i64, ux: i64, uy: i64, uz: i64) -> T {
    // 2t/(1+t^2) = 2 num den / (den^2 + num^2)
    let m_num = 2 * num * den;
    let m_den = den * den + num * num;
    T::from_parts(
        <T::Real as RealScalar>::from_ratio(m_num * ux, m_den * uz),
        <T::Real as RealScalar>::from_ratio(m_num * uy, m_den * uz),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, FloatComplex};

    type Q = ExactComplex;

    #[test]
    fn pythagorean_pair() {
        let s = VerblunskySeq::constant(Q::from_ratio(3, 5)).unwrap();
        assert_eq!(s.rho(7), Q::from_ratio(4, 5));
    }

    #[test]
    fn non_pythagorean_rejected_exactly() {
        let e = VerblunskySeq::constant(Q::from_ratio(1, 2)).unwrap_err();
        assert!(matches!(e, CmvError::InvalidVerblunsky { .. }));
        assert!(VerblunskySeq::constant(FloatComplex::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn outside_disk_rejected() {
        assert!(VerblunskySeq::constant(Q::one()).is_err());
        assert!(VerblunskySeq::list(vec![Q::zero(), Q::from_ratios(3, 5, 4, 5)]).is_err());
    }

    #[test]
    fn list_is_zero_beyond_its_length() {
        let s = VerblunskySeq::list(vec![Q::from_ratio(3, 5)]).unwrap();
        assert_eq!(s.alpha(0), Q::from_ratio(3, 5));
        assert!(s.alpha(1).is_zero());
        assert_eq!(s.rho(1), Q::one());
    }

    #[test]
    fn random_values_are_pythagorean() {
        for seed in 0..20 {
            let s = VerblunskySeq::<Q>::random_pythagorean(8, seed);
            assert!(!s.is_zero());
            for (a, r) in s.coefficients(8) {
                assert_eq!(a.norm_sqr() + r.re.clone() * r.re.clone(), RealScalar::one());
                assert!(r.re > RealScalar::zero());
            }
        }
        assert_eq!(
            VerblunskySeq::<Q>::random_pythagorean(6, 3),
            VerblunskySeq::<Q>::random_pythagorean(6, 3)
        );
    }

    #[test]
    fn geometric_decays() {
        let s = VerblunskySeq::geometric(FloatComplex::new(0.0, 0.5), 0.5).unwrap();
        assert!((s.alpha(2) - FloatComplex::new(0.0, 0.125)).norm() < 1e-15);
        assert!(VerblunskySeq::geometric(Q::from_ratio(3, 5), 0.5).is_err());
    }
}
