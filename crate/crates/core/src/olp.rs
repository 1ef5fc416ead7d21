//! Orthonormal Laurent polynomials and the moment-based Gram–Schmidt oracle.

use crate::band::BandMatrix;
use crate::cmv::build_cmv;
use crate::error::{CmvError, Result};
use crate::laurent::LaurentPoly;
use crate::scalar::{RealScalar, Scalar};
use crate::verblunsky::VerblunskySeq;

/// The OLP sequences `x_0..x_N` (ordered `1, z^-1, z, ...`) and
/// `χ_0..χ_N` (ordered `1, z, z^-1, ...`).
#[derive(Clone, Debug, PartialEq)]
pub struct OlpPair<T: Scalar> {
    pub x: Vec<LaurentPoly<T>>,
    pub chi: Vec<LaurentPoly<T>>,
}

impl<T: Scalar> OlpPair<T> {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `(x_0(z), ..., x_N(z))`.
    pub fn eval_x(&self, z: &T) -> Result<Vec<T>> {
        self.x.iter().map(|p| p.eval(z)).collect()
    }
}

/// Degree of the `n`-th monomial in the order `1, z^-1, z, z^-2, z^2, ...`.
pub fn x_order_degree(n: usize) -> i64 {
    let n = n as i64;
    if n % 2 == 0 {
        n / 2
    } else {
        -(n + 1) / 2
    }
}

/// Runs the block recurrence for `x_0..x_count` and `χ_0..χ_count`.
pub fn compute_olp<T: Scalar>(alpha: &VerblunskySeq<T>, count: usize) -> OlpPair<T> {
    let coeffs = alpha.coefficients(count + 1);
    let mut x = vec![LaurentPoly::one()];
    let mut chi = vec![LaurentPoly::one()];
    let z = LaurentPoly::z();
    let mut k = 0;
    while x.len() <= count {
        let (a0, r0) = &coeffs[2 * k];
        let inv_r0 = T::one() / r0.clone();
        let chi1 = z
            .mul_ref(&x[2 * k])
            .sub_ref(&chi[2 * k].scale(&a0.conj()))
            .scale(&inv_r0);
        let x1 = chi[2 * k]
            .scale(r0)
            .sub_ref(&chi1.scale(a0))
            .shift(-1);
        x.push(x1);
        chi.push(chi1);
        if x.len() > count {
            break;
        }
        let (a1, r1) = &coeffs[2 * k + 1];
        let x_odd = &x[2 * k + 1];
        let x2 = chi[2 * k + 1]
            .sub_ref(&x_odd.scale(&a1.conj()))
            .scale(&(T::one() / r1.clone()));
        let chi2 = x_odd.scale(r1).sub_ref(&x2.scale(a1));
        x.push(x2);
        chi.push(chi2);
        k += 1;
    }
    OlpPair { x, chi }
}

/// `m_k = (C^k)_{0,0}` for `k >= 0`, `m_{-k} = conj(m_k)`, computed on a
/// window of size `window`.
pub fn moments<T: Scalar>(alpha: &VerblunskySeq<T>, k: i64, window: usize) -> Result<T> {
    let kmax = k.unsigned_abs() as usize;
    let ms = moment_sequence(alpha, kmax, window)?;
    let m = ms[kmax].clone();
    Ok(if k < 0 { m.conj() } else { m })
}

/// `[m_0, ..., m_kmax]`.
pub fn moment_sequence<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    kmax: usize,
    window: usize,
) -> Result<Vec<T>> {
    let pair = build_cmv(alpha, window)?;
    let mut power = BandMatrix::identity(window);
    let mut out = vec![T::one()];
    for _ in 0..kmax {
        power = pair.c.mul(&power)?;
        if power.horizon() == 0 {
            return Err(CmvError::HorizonExhausted {
                op: "moments",
                window,
            });
        }
        out.push(power.get(0, 0));
    }
    Ok(out)
}

/// Inner product `<f, g> = sum_{a,b} f_a conj(g_b) m_{a-b}`.
fn inner<T: Scalar>(f: &LaurentPoly<T>, g: &LaurentPoly<T>, m: &dyn Fn(i64) -> T) -> T {
    let mut acc = T::zero();
    for (a, fa) in f.terms() {
        for (b, gb) in g.terms() {
            acc.add_prod(&(fa.clone() * gb.conj()), &m(a - b));
        }
    }
    acc
}

/// Orthonormalises `1, z^-1, z, z^-2, ...` against the moment functional.
/// Each `x_n` gets a positive coefficient on its newest monomial; `χ_n` is
/// obtained from the order `1, z, z^-1, ...` the same way.
pub fn gram_schmidt_oracle<T: Scalar>(alpha: &VerblunskySeq<T>, count: usize) -> Result<OlpPair<T>> {
    let kmax = count + 1;
    let ms = moment_sequence(alpha, kmax, 2 * kmax + 6)?;
    let m = |d: i64| -> T {
        let v = &ms[d.unsigned_abs() as usize];
        if d < 0 {
            v.conj()
        } else {
            v.clone()
        }
    };
    let x = orthonormalize((0..=count).map(x_order_degree), &m)?;
    let chi = orthonormalize((0..=count).map(|n| -x_order_degree(n)), &m)?;
    Ok(OlpPair { x, chi })
}

fn orthonormalize<T: Scalar>(
    degrees: impl Iterator<Item = i64>,
    m: &dyn Fn(i64) -> T,
) -> Result<Vec<LaurentPoly<T>>> {
    let mut basis: Vec<LaurentPoly<T>> = Vec::new();
    for (index, d) in degrees.enumerate() {
        let e = LaurentPoly::monomial(T::one(), d);
        let mut v = e.clone();
        for b in &basis {
            let c = inner(&e, b, m);
            v = v.sub_ref(&b.scale(&c));
        }
        let nsq = inner(&v, &v, m).re();
        let scale = v.max_magnitude().powi(2);
        if nsq <= T::Real::zero() || (!T::EXACT && nsq.to_f64() <= 1e-12 * scale) {
            return Err(CmvError::GramNotPositive { index });
        }
        let norm = nsq.sqrt().ok_or(CmvError::GramNotPositive { index })?;
        basis.push(v.scale(&(T::one() / T::from_real(norm))));
    }
    Ok(basis)
}
