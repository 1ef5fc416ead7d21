//! Linear differential operators `D = sum_k D_k(z) (d/dz)^k` with Laurent
//! polynomial coefficients.

use std::fmt;

use crate::laurent::LaurentPoly;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DiffOperator<T: Scalar> {
    coeffs: Vec<LaurentPoly<T>>,
}

impl<T: Scalar> DiffOperator<T> {
    /// Builds `sum_k coeffs[k] (d/dz)^k`; trailing zero coefficients are trimmed.
    pub fn new(coeffs: Vec<LaurentPoly<T>>) -> Self {
        let mut op = DiffOperator { coeffs };
        while op.coeffs.last().is_some_and(|c| c.is_zero()) {
            op.coeffs.pop();
        }
        op
    }

    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: LaurentPoly<T>) -> Self {
        Self::new(vec![f])
    }

    /// `d/dz`.
    pub fn derivative() -> Self {
        Self::new(vec![LaurentPoly::zero(), LaurentPoly::one()])
    }

    /// The Euler operator `z d/dz`.
    pub fn euler() -> Self {
        Self::new(vec![LaurentPoly::zero(), LaurentPoly::z()])
    }

    pub fn coeffs(&self) -> &[LaurentPoly<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> LaurentPoly<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    /// Index of the last nonzero coefficient; 0 for multiplication operators
    /// (including the zero operator).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn apply(&self, f: &LaurentPoly<T>) -> LaurentPoly<T> {
        let mut acc = LaurentPoly::zero();
        let mut deriv = f.clone();
        for (k, dk) in self.coeffs.iter().enumerate() {
            if k > 0 {
                deriv = deriv.derivative();
            }
            if !dk.is_zero() && !deriv.is_zero() {
                acc = acc.add_ref(&dk.mul_ref(&deriv));
            }
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| self.coeff(k).add_ref(&other.coeff(k)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|d| d.scale(c)).collect())
    }

    /// Operator product `self ∘ other`, using the Leibniz rule
    /// `∂^i (b ∂^j) = sum_l C(i,l) b^(l) ∂^(i-l+j)`.
    pub fn compose(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![LaurentPoly::zero(); self.order() + other.order() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let mut bl = b.clone();
                for l in 0..=i {
                    if l > 0 {
                        bl = bl.derivative();
                    }
                    if bl.is_zero() {
                        break;
                    }
                    let c = T::from_i64(binomial(i, l));
                    let term = a.mul_ref(&bl).scale(&c);
                    let slot = i - l + j;
                    out[slot] = out[slot].add_ref(&term);
                }
            }
        }
        Self::new(out)
    }

    /// The operator `D_*` with `D_* f = (D f_*)_*`. Built from
    /// `(A B)_* = A_* B_*`, `(a·)_* = (a_*)·` and `(d/dz)_* = -z^2 d/dz`.
    pub fn substar(&self) -> Self {
        let d_star = Self::new(vec![
            LaurentPoly::zero(),
            LaurentPoly::monomial(-T::one(), 2),
        ]);
        let mut power = Self::multiplication(LaurentPoly::one());
        let mut acc = Self::zero();
        for (k, dk) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = power.compose(&d_star);
            }
            if dk.is_zero() {
                continue;
            }
            let term = Self::multiplication(dk.substar()).compose(&power);
            acc = acc.add(&term);
        }
        acc
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    let mut acc: i64 = 1;
    for t in 0..k {
        acc = acc * (n - t) as i64 / (t + 1) as i64;
    }
    acc
}

impl<T: Scalar> fmt::Debug for DiffOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{c}]")?,
                1 => write!(f, "[{c}] d/dz")?,
                _ => write!(f, "[{c}] d^{k}/dz^{k}")?,
            }
        }
        Ok(())
    }
}
