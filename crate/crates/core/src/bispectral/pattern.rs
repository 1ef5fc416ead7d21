use std::fmt;

use crate::band::BandMatrix;
use crate::error::{CmvError, Result};
use crate::scalar::{RealScalar, Scalar};

/// Shape of the Hermitian unknown `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Diagonal,
    /// Diagonal except for a full Hermitian `head x head` block.
    AlmostDiagonal { head: usize },
    Tridiagonal,
    /// Tridiagonal except for a full Hermitian `head x head` block.
    AlmostTridiagonal { head: usize },
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternKind::Diagonal => write!(f, "diagonal"),
            PatternKind::AlmostDiagonal { head } => write!(f, "almost-diagonal({head})"),
            PatternKind::Tridiagonal => write!(f, "tridiagonal"),
            PatternKind::AlmostTridiagonal { head } => write!(f, "almost-tridiagonal({head})"),
        }
    }
}

/// A real parameter of a Hermitian unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Param {
    /// The real diagonal entry `(i, i)`.
    Diag(usize),
    /// `Re Ω_{ij} = Re Ω_{ji}` for `i < j`.
    Re(usize, usize),
    /// `Im Ω_{ij} = -Im Ω_{ji}` for `i < j`.
    Im(usize, usize),
}

/// A pattern truncated to indices `0..size`; entries at or beyond `size`
/// are outside the unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SolvePattern {
    pub kind: PatternKind,
    pub size: usize,
}

impl SolvePattern {
    pub fn new(kind: PatternKind, size: usize) -> Result<Self> {
        let p = SolvePattern { kind, size };
        if size == 0 {
            return Err(CmvError::InvalidPattern("size must be positive".into()));
        }
        if p.head() >= size {
            return Err(CmvError::InvalidPattern(format!(
                "head block {} must be smaller than size {size}",
                p.head()
            )));
        }
        Ok(p)
    }

    pub fn head(&self) -> usize {
        match self.kind {
            PatternKind::AlmostDiagonal { head } | PatternKind::AlmostTridiagonal { head } => head,
            _ => 0,
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        matches!(
            self.kind,
            PatternKind::Tridiagonal | PatternKind::AlmostTridiagonal { .. }
        )
    }

    /// Upper bandwidth of a patterned matrix.
    pub fn bandwidth(&self) -> usize {
        self.head().saturating_sub(1).max(usize::from(self.is_tridiagonal()))
    }

    /// The real parameters, head block first, then the tail.
    pub fn params(&self) -> Vec<Param> {
        let n0 = self.head();
        let mut out = Vec::new();
        for i in 0..n0 {
            out.push(Param::Diag(i));
            for j in i + 1..n0 {
                out.push(Param::Re(i, j));
                out.push(Param::Im(i, j));
            }
        }
        for k in n0..self.size {
            out.push(Param::Diag(k));
        }
        if self.is_tridiagonal() {
            for k in n0.saturating_sub(1)..self.size - 1 {
                out.push(Param::Re(k, k + 1));
                out.push(Param::Im(k, k + 1));
            }
        }
        out
    }

    fn empty<T: Scalar>(&self, window: usize) -> BandMatrix<T> {
        let b = self.bandwidth();
        BandMatrix::zeros(window, b, b)
    }

    /// The Hermitian unit matrix of one parameter.
    pub fn unit<T: Scalar>(&self, p: Param, window: usize) -> BandMatrix<T> {
        let mut m = self.empty(window);
        write_param(&mut m, p, T::one());
        m
    }

    /// `sum_p v_p * unit(p)`, embedded in a window of size `window`.
    pub fn matrix<T: Scalar>(&self, values: &[T::Real], window: usize) -> BandMatrix<T> {
        let mut m = self.empty(window);
        for (p, v) in self.params().into_iter().zip(values) {
            if !v.is_zero() {
                write_param(&mut m, p, T::from_real(v.clone()));
            }
        }
        m
    }

    /// Reads the parameters of a Hermitian matrix in this pattern.
    pub fn params_of<T: Scalar>(&self, omega: &BandMatrix<T>) -> Vec<T::Real> {
        self.params()
            .into_iter()
            .map(|p| match p {
                Param::Diag(i) => omega.get(i, i).re(),
                Param::Re(i, j) => omega.get(i, j).re(),
                Param::Im(i, j) => omega.get(i, j).im(),
            })
            .collect()
    }
}

/// Adds `v * unit(p)` to `m`; `v` is real.
fn write_param<T: Scalar>(m: &mut BandMatrix<T>, p: Param, v: T) {
    if v.is_zero() {
        return;
    }
    let bump = |m: &mut BandMatrix<T>, i: usize, j: usize, x: T| {
        if i < m.window() && j < m.window() {
            let cur = m.get(i, j);
            m.set(i, j, cur + x);
        }
    };
    match p {
        Param::Diag(i) => bump(m, i, i, v),
        Param::Re(i, j) => {
            bump(m, i, j, v.clone());
            bump(m, j, i, v);
        }
        Param::Im(i, j) => {
            let iv = T::i() * v;
            bump(m, i, j, iv.clone());
            bump(m, j, i, -iv);
        }
    }
}
