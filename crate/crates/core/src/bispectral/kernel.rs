//! Checks on the generalized eigenvectors of `C`: the derivative cascade
//! spanning `ker (C - zI)^n`, the band structure of `K(n)(C - zI)^n`, and the
//! top diagonals that force tridiagonal tails to vanish.

use crate::ad::{hermitian_ad_recursive, scale_of};
use crate::band::BandMatrix;
use crate::cmv::{build_cmv, CmvPair};
use crate::error::{CmvError, Result};
use crate::laurent::pow;
use crate::olp::compute_olp;
use crate::scalar::{Scalar, Tolerance};
use crate::verblunsky::VerblunskySeq;

#[derive(Clone, Debug, PartialEq)]
pub struct KernelCheckReport<T: Scalar> {
    pub order: usize,
    pub z: T,
    /// `cascade[k]`: `(C - zI) x^(k)(z) = k x^(k-1)(z)` on trusted rows, `k < n`.
    pub cascade: Vec<bool>,
    pub cascade_rows: usize,
    /// Observed `(below, above)` bandwidth of `K(n)(C - zI)^n`.
    pub band: (usize, usize),
    pub band_ok: bool,
    /// Top diagonal of `K(n)(C - zI)^n`, computed and closed form.
    pub gamma: Vec<T>,
    pub gamma_expected: Vec<T>,
    pub gamma_ok: bool,
    pub gamma_nonzero: bool,
    /// Top diagonal of `(ad_n C)` applied to the tridiagonal tail, computed
    /// and closed form.
    pub delta: Vec<T>,
    pub delta_expected: Vec<T>,
    pub delta_ok: bool,
}

impl<T: Scalar> KernelCheckReport<T> {
    pub fn all_pass(&self) -> bool {
        self.cascade.iter().all(|&c| c)
            && self.band_ok
            && self.gamma_ok
            && self.gamma_nonzero
            && self.delta_ok
    }
}

/// `K(2m) = (C†)^m`, `K(2m+1) = L† (C†)^m`.
pub fn k_factor<T: Scalar>(pair: &CmvPair<T>, n: usize) -> Result<BandMatrix<T>> {
    let cd = pair.c.dagger();
    let mut k = if n.is_multiple_of(2) {
        BandMatrix::identity(pair.window())
    } else {
        pair.l.dagger()
    };
    for _ in 0..n / 2 {
        k = k.mul(&cd)?;
    }
    Ok(k)
}

fn rho_product<T: Scalar>(alpha: &VerblunskySeq<T>, from: usize, len: usize) -> T {
    (from..from + len).fold(T::one(), |acc, j| acc * alpha.rho(j))
}

/// `γ_k = ρ_k ... ρ_{k+n-1}` when `k ≡ n (mod 2)`, otherwise
/// `(-1)^n z^n ρ_k ... ρ_{k+n-1}`.
pub fn gamma_closed_form<T: Scalar>(alpha: &VerblunskySeq<T>, z: &T, n: usize, k: usize) -> T {
    let r = rho_product(alpha, k, n);
    if k % 2 == n % 2 {
        r
    } else {
        let sign = T::from_i64(if n.is_multiple_of(2) { 1 } else { -1 });
        sign * pow(z, n as u64) * r
    }
}

/// `δ_k = ρ_k ... ρ_{k+n-1} λ_{k+n} ρ_{k+n+1} ... ρ_{k+2n}`, with an extra
/// factor `(-1)^(k+1)` for odd `n`.
pub fn delta_closed_form<T: Scalar>(alpha: &VerblunskySeq<T>, tail: &[T], n: usize, k: usize) -> T {
    let lambda = tail.get(k + n).cloned().unwrap_or_else(T::zero);
    let v = rho_product(alpha, k, n) * lambda * rho_product(alpha, k + n + 1, n);
    if n % 2 == 1 && k.is_multiple_of(2) {
        -v
    } else {
        v
    }
}

/// `Λ S + S† Λ†` with `Λ = diag(tail)`.
pub fn tridiagonal_tail<T: Scalar>(tail: &[T], window: usize) -> BandMatrix<T> {
    let mut m = BandMatrix::zeros(window, 1, 1);
    for (k, v) in tail.iter().enumerate().take(window.saturating_sub(1)) {
        m.set(k, k + 1, v.clone());
        m.set(k + 1, k, v.conj());
    }
    m
}

fn close<T: Scalar>(a: &T, b: &T, scale: f64, tol: &Tolerance) -> bool {
    (a.clone() - b.clone()).is_negligible(scale, tol.zero)
}

/// Runs every check for `(α, z, n)` on a window of size `window`; `tail`
/// supplies the off-diagonal `λ_k` for the top-diagonal check.
pub fn verify_kernel_basis<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    z: &T,
    n: usize,
    window: usize,
    tail: &[T],
    tol: &Tolerance,
) -> Result<KernelCheckReport<T>> {
    if z.is_zero() {
        return Err(CmvError::ZeroArgument);
    }
    if n == 0 {
        return Err(CmvError::InvalidPattern("order must be at least 1".into()));
    }
    let pair = build_cmv(alpha, window)?;
    let zi = BandMatrix::identity(window).scale(z);
    let shifted = pair.c.sub(&zi)?;

    // derivative cascade
    let olp = compute_olp(alpha, window - 1);
    let mut vectors: Vec<Vec<T>> = Vec::new();
    let mut polys = olp.x.clone();
    for _ in 0..n {
        vectors.push(polys.iter().map(|p| p.eval(z)).collect::<Result<_>>()?);
        polys = polys.iter().map(|p| p.derivative()).collect();
    }
    let mut cascade = Vec::with_capacity(n);
    let mut cascade_rows = usize::MAX;
    for k in 0..n {
        let lhs = shifted.apply_vec(&vectors[k]);
        cascade_rows = cascade_rows.min(lhs.len());
        let factor = T::from_i64(k as i64);
        let scale = vectors[k]
            .iter()
            .chain(if k > 0 { vectors[k - 1].iter() } else { [].iter() })
            .map(|v| v.magnitude())
            .fold(1.0, f64::max);
        let ok = lhs.iter().enumerate().all(|(row, v)| {
            let rhs = if k == 0 {
                T::zero()
            } else {
                factor.clone() * vectors[k - 1][row].clone()
            };
            close(v, &rhs, scale, tol)
        });
        cascade.push(ok);
    }
    if cascade_rows == 0 {
        return Err(CmvError::HorizonExhausted {
            op: "kernel cascade",
            window,
        });
    }

    // K(n)(C - zI)^n
    let mut power = BandMatrix::identity(window);
    for _ in 0..n {
        power = power.mul(&shifted)?;
    }
    let product = k_factor(&pair, n)?.mul(&power)?;
    let scale = scale_of(&[&product]);
    let band = product.band_profile(tol, scale);
    let band_ok = band.0 <= n && band.1 <= n;
    let gamma = product.diagonal(n as isize);
    if gamma.is_empty() {
        return Err(CmvError::HorizonExhausted {
            op: "kernel band",
            window,
        });
    }
    let gamma_expected: Vec<T> = (0..gamma.len()).map(|k| gamma_closed_form(alpha, z, n, k)).collect();
    let gamma_ok = gamma.iter().zip(&gamma_expected).all(|(a, b)| close(a, b, scale, tol));
    let gamma_nonzero = gamma.iter().all(|g| !g.is_negligible(scale, tol.zero));

    // top diagonal of the ad image of a tridiagonal tail
    let omega = tridiagonal_tail(tail, window);
    let image = hermitian_ad_recursive(&pair, &omega, n)?;
    let delta = image.diagonal(2 * n as isize + 1);
    let delta_expected: Vec<T> = (0..delta.len()).map(|k| delta_closed_form(alpha, tail, n, k)).collect();
    let dscale = scale_of(&[&omega]);
    let delta_ok = delta.iter().zip(&delta_expected).all(|(a, b)| close(a, b, dscale, tol));

    Ok(KernelCheckReport {
        order: n,
        z: z.clone(),
        cascade,
        cascade_rows,
        band,
        band_ok,
        gamma,
        gamma_expected,
        gamma_ok,
        gamma_nonzero,
        delta,
        delta_expected,
        delta_ok,
    })
}
