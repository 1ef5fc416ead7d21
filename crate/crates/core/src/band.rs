//! Finite windows of banded infinite matrices.
//!
//! A [`BandMatrix`] stores rows and columns `0..window` of an infinite
//! operator with lower bandwidth `p` and upper bandwidth `q`, together with a
//! *trust horizon* `H <= window`: every entry `(i, j)` with `max(i, j) < H`
//! equals the entry of the infinite operator it represents. Entries outside
//! the horizon are whatever the truncated arithmetic produced and must not be
//! relied on.
//!
//! Horizons propagate conservatively. For a product `AB`, entry `(i, j)`
//! sums `A[i,k] B[k,j]` over `k <= min(i + q_A, j + p_B)`, so the result is
//! trusted below `min(H_A, H_B) - min(q_A, p_B)`.

use std::fmt;

use crate::error::{CmvError, Result};
use crate::scalar::{RealScalar, Scalar, Tolerance};

#[derive(Clone, PartialEq)]
pub struct BandMatrix<T: Scalar> {
    window: usize,
    lower: usize,
    upper: usize,
    horizon: usize,
    /// `diags[d + lower][min(i, j)]` holds entry `(i, j)` with `d = j - i`.
    diags: Vec<Vec<T>>,
}

impl<T: Scalar> BandMatrix<T> {
    /// The zero operator with the given declared bandwidths.
    pub fn zeros(window: usize, lower: usize, upper: usize) -> Self {
        let lower = lower.min(window.saturating_sub(1));
        let upper = upper.min(window.saturating_sub(1));
        let diags = (0..=lower + upper)
            .map(|idx| {
                let d = idx as isize - lower as isize;
                vec![T::zero(); window - d.unsigned_abs()]
            })
            .collect();
        BandMatrix {
            window,
            lower,
            upper,
            horizon: window,
            diags,
        }
    }

    pub fn identity(window: usize) -> Self {
        Self::from_diagonal(vec![T::one(); window])
    }

    /// The diagonal operator `diag(values)`; zero beyond the window.
    pub fn from_diagonal(values: Vec<T>) -> Self {
        let window = values.len();
        BandMatrix {
            window,
            lower: 0,
            upper: 0,
            horizon: window,
            diags: vec![values],
        }
    }

    /// The shift `S` with ones on the first superdiagonal.
    pub fn shift(window: usize) -> Self {
        Self::from_fn(window, 0, 1, |i, j| {
            if j == i + 1 {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Builds an operator whose entries are given by `f` inside the band.
    pub fn from_fn<F: FnMut(usize, usize) -> T>(
        window: usize,
        lower: usize,
        upper: usize,
        mut f: F,
    ) -> Self {
        let mut m = Self::zeros(window, lower, upper);
        for i in 0..window {
            for j in i.saturating_sub(m.lower)..(i + m.upper + 1).min(window) {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Shrinks the trust horizon to `min(horizon, h)`.
    pub fn with_horizon(mut self, h: usize) -> Self {
        self.horizon = self.horizon.min(h);
        self
    }

    fn slot(&self, i: usize, j: usize) -> Option<(usize, usize)> {
        if i >= self.window || j >= self.window {
            return None;
        }
        let d = j as isize - i as isize;
        if d < -(self.lower as isize) || d > self.upper as isize {
            return None;
        }
        Some(((d + self.lower as isize) as usize, i.min(j)))
    }

    pub fn get_ref(&self, i: usize, j: usize) -> Option<&T> {
        self.slot(i, j).map(|(a, b)| &self.diags[a][b])
    }

    /// Entry `(i, j)`; zero outside the band or window.
    pub fn get(&self, i: usize, j: usize) -> T {
        self.get_ref(i, j).cloned().unwrap_or_else(T::zero)
    }

    /// Sets entry `(i, j)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the declared band or the window.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let (a, b) = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside band"));
        self.diags[a][b] = v;
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut T {
        let (a, b) = self.slot(i, j).expect("entry outside band");
        &mut self.diags[a][b]
    }

    /// Iterates over stored entries `(i, j, value)` inside the horizon.
    pub fn trusted_entries(&self) -> impl Iterator<Item = (usize, usize, &T)> + '_ {
        let h = self.horizon;
        self.diags.iter().enumerate().flat_map(move |(idx, diag)| {
            let d = idx as isize - self.lower as isize;
            diag.iter().enumerate().filter_map(move |(k, v)| {
                let (i, j) = if d >= 0 {
                    (k, k + d as usize)
                } else {
                    (k + d.unsigned_abs(), k)
                };
                (i.max(j) < h).then_some((i, j, v))
            })
        })
    }

    /// Entries `A[k, k+d]` for every `k` with `max(k, k+d) < horizon`.
    pub fn diagonal(&self, d: isize) -> Vec<T> {
        let h = self.horizon as isize;
        let len = (h - d.abs()).max(0) as usize;
        (0..len)
            .map(|t| {
                let (i, j) = if d >= 0 {
                    (t, t + d as usize)
                } else {
                    (t + d.unsigned_abs(), t)
                };
                self.get(i, j)
            })
            .collect()
    }

    fn check_window(&self, other: &Self) -> Result<()> {
        if self.window != other.window {
            return Err(CmvError::WindowMismatch {
                left: self.window,
                right: other.window,
            });
        }
        Ok(())
    }

    fn checked_horizon(h: isize, window: usize, op: &'static str) -> Result<usize> {
        if h <= 0 {
            Err(CmvError::HorizonExhausted { op, window })
        } else {
            Ok(h as usize)
        }
    }

    /// Matrix product. Zero factors are skipped, so sparse operands stay
    /// cheap regardless of their declared bandwidth.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_window(other)?;
        let n = self.window;
        let h = self.horizon.min(other.horizon) as isize - self.upper.min(other.lower) as isize;
        let horizon = Self::checked_horizon(h, n, "mul")?;
        let mut out = Self::zeros(n, self.lower + other.lower, self.upper + other.upper);
        for i in 0..n {
            let k_lo = i.saturating_sub(self.lower);
            let k_hi = (i + self.upper + 1).min(n);
            for k in k_lo..k_hi {
                let a = &self.diags[(k as isize - i as isize + self.lower as isize) as usize][i.min(k)];
                if a.is_zero() {
                    continue;
                }
                let j_lo = k.saturating_sub(other.lower);
                let j_hi = (k + other.upper + 1).min(n);
                for j in j_lo..j_hi {
                    let b = &other.diags[(j as isize - k as isize + other.lower as isize) as usize]
                        [k.min(j)];
                    if b.is_zero() {
                        continue;
                    }
                    out.entry_mut(i, j).add_prod(a, b);
                }
            }
        }
        out.horizon = horizon;
        Ok(out)
    }

    fn combine(&self, other: &Self, sign: T) -> Result<Self> {
        self.check_window(other)?;
        let mut out = Self::zeros(
            self.window,
            self.lower.max(other.lower),
            self.upper.max(other.upper),
        );
        for (src, s) in [(self, None), (other, Some(&sign))] {
            for (idx, diag) in src.diags.iter().enumerate() {
                let d = idx as isize - src.lower as isize;
                let tidx = (d + out.lower as isize) as usize;
                for (k, v) in diag.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    match s {
                        None => out.diags[tidx][k].add_assign_ref(v),
                        Some(s) => out.diags[tidx][k].add_prod(s, v),
                    }
                }
            }
        }
        out.horizon = self.horizon.min(other.horizon);
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -T::one())
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &T, other: &Self) -> Result<Self> {
        self.combine(other, c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = self.clone();
        for diag in &mut out.diags {
            for v in diag.iter_mut() {
                if !v.is_zero() {
                    *v = v.clone() * c.clone();
                }
            }
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    fn reflect(&self, conjugate: bool) -> Self {
        let mut diags = self.diags.clone();
        diags.reverse();
        if conjugate {
            for diag in &mut diags {
                for v in diag.iter_mut() {
                    *v = v.conj();
                }
            }
        }
        BandMatrix {
            window: self.window,
            lower: self.upper,
            upper: self.lower,
            horizon: self.horizon,
            diags,
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        self.reflect(true)
    }

    pub fn transpose(&self) -> Self {
        self.reflect(false)
    }

    /// Largest entry magnitude inside the horizon.
    pub fn max_magnitude(&self) -> f64 {
        self.trusted_entries()
            .map(|(_, _, v)| v.magnitude())
            .fold(0.0, f64::max)
    }

    /// True iff every entry inside the horizon is zero (exact) or at most
    /// `tol.zero * scale` in magnitude (float).
    pub fn is_zero_with(&self, tol: &Tolerance, scale: f64) -> bool {
        self.trusted_entries()
            .all(|(_, _, v)| v.is_negligible(scale, tol.zero))
    }

    /// [`is_zero_with`](Self::is_zero_with) with default tolerance and unit scale.
    pub fn is_zero(&self) -> bool {
        self.is_zero_with(&Tolerance::default(), 1.0)
    }

    /// Largest `|A[i,j] - B[i,j]|` over the common horizon.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?;
        Ok(diff.max_magnitude())
    }

    /// Compares two operators on their common horizon.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerance, scale: f64) -> Result<bool> {
        Ok(self.sub(other)?.is_zero_with(tol, scale))
    }

    /// Hermiticity test `A[i,j] == conj(A[j,i])` inside the horizon.
    pub fn is_hermitian_with(&self, tol: &Tolerance, scale: f64) -> bool {
        self.sub(&self.dagger())
            .map(|d| d.is_zero_with(tol, scale))
            .unwrap_or(false)
    }

    /// Largest offsets `(below, above)` of nonzero entries inside the horizon.
    pub fn band_profile(&self, tol: &Tolerance, scale: f64) -> (usize, usize) {
        let mut below = 0;
        let mut above = 0;
        for (i, j, v) in self.trusted_entries() {
            if v.is_negligible(scale, tol.zero) {
                continue;
            }
            if j >= i {
                above = above.max(j - i);
            } else {
                below = below.max(i - j);
            }
        }
        (below, above)
    }

    /// Applies the operator to a vector `v` (indexed like the window) and
    /// returns the rows whose value is fully determined: row `i` is kept when
    /// `i < horizon` and every column it reaches lies inside `v`.
    pub fn apply_vec(&self, v: &[T]) -> Vec<T> {
        let rows = self
            .horizon
            .min(v.len().saturating_sub(self.upper))
            .min(self.window);
        (0..rows)
            .map(|i| {
                let mut acc = T::zero();
                let from = i.saturating_sub(self.lower);
                for (j, x) in v.iter().enumerate().take(i + self.upper + 1).skip(from) {
                    if let Some(a) = self.get_ref(i, j) {
                        acc.add_prod(a, x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Restriction to rows and columns `0..size`, keeping the horizon.
    pub fn truncate(&self, size: usize) -> Self {
        let size = size.min(self.window);
        let mut out = Self::from_fn(size, self.lower, self.upper, |i, j| self.get(i, j));
        out.horizon = self.horizon.min(size);
        out
    }

    /// Re-embeds the operator into a larger window, padding with zeros. The
    /// horizon is kept, since entries beyond it were never trusted.
    pub fn embed(&self, window: usize) -> Self {
        let mut out = Self::from_fn(window.max(self.window), self.lower, self.upper, |i, j| {
            self.get(i, j)
        });
        out.horizon = self.horizon;
        out
    }

    /// Drops the stored diagonals whose offset lies outside `[-lower, upper]`.
    /// Only valid when the represented operator is known to vanish there.
    pub fn with_band(&self, lower: usize, upper: usize) -> Self {
        let mut out = Self::from_fn(self.window, lower, upper, |i, j| self.get(i, j));
        out.horizon = self.horizon;
        out
    }

    /// A band operator with small complex rational entries `p/q + i r/s`,
    /// `|p|, |r| <= 4`, `q, s <= 3`. Entry `(i, j)` depends only on
    /// `(seed, i, j)`, so windows of different sizes describe the same
    /// infinite operator.
    pub fn random(window: usize, lower: usize, upper: usize, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        Self::from_fn(window, lower, upper, |i, j| {
            let mix = seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((i as u64) << 32 | j as u64);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(mix);
            let mut part = || T::Real::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            let re = part();
            let im = part();
            T::from_parts(re, im)
        })
    }

    /// `A + A†` for `A` = [`BandMatrix::random`] with bandwidth `band`.
    pub fn random_hermitian(window: usize, band: usize, seed: u64) -> Self {
        let a = Self::random(window, band, band, seed);
        a.add(&a.dagger()).expect("same window")
    }

    /// The same operator over `f64` complex numbers.
    pub fn to_float(&self) -> BandMatrix<crate::scalar::FloatComplex> {
        BandMatrix {
            window: self.window,
            lower: self.lower,
            upper: self.upper,
            horizon: self.horizon,
            diags: self.diags.iter().map(|d| d.iter().map(|v| v.to_c64()).collect()).collect(),
        }
    }
}

impl<T: Scalar> fmt::Debug for BandMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "BandMatrix(window={}, band=({}, {}), horizon={})",
            self.window, self.lower, self.upper, self.horizon
        )?;
        let show = self.window.min(8);
        for i in 0..show {
            let row: Vec<String> = (0..show).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
