//! Nullspaces and ranks of real linear systems.
//!
//! Systems arrive as sparse rows `[(column, value)]`. The exact path runs
//! incremental Gaussian elimination over the rationals; the float path takes
//! an SVD and thresholds singular values at `tol.rank * sigma_max`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};

use crate::error::{CmvError, Result};
use crate::scalar::{Rational, Tolerance};

pub type SparseRow<R> = Vec<(usize, R)>;

/// Row-echelon form built one row at a time. Each stored row is keyed by its
/// pivot column, has a unit pivot and no entries left of it.
#[derive(Clone, Debug, Default)]
pub struct ExactEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl ExactEchelon {
    pub fn new(ncols: usize) -> Self {
        ExactEchelon {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Reduces `row` against the stored pivots and stores the remainder if
    /// nonzero. Returns whether the rank grew.
    pub fn push(&mut self, row: &[(usize, Rational)]) -> bool {
        let mut r: BTreeMap<usize, Rational> = BTreeMap::new();
        for (c, v) in row {
            if !v.is_zero() {
                let e = r.entry(*c).or_insert_with(Rational::zero);
                *e += v;
                if e.is_zero() {
                    r.remove(c);
                }
            }
        }
        let mut cursor = 0;
        loop {
            let Some((&lead, _)) = r.range(cursor..).next() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let f = r.remove(&lead).expect("present");
                    for (c, v) in p.iter().skip(1) {
                        let e = r.entry(*c).or_insert_with(Rational::zero);
                        *e -= &f * v;
                        if e.is_zero() {
                            r.remove(c);
                        }
                    }
                    cursor = lead + 1;
                }
                None => {
                    let inv = Rational::one() / &r[&lead];
                    for v in r.values_mut() {
                        *v *= &inv;
                    }
                    self.pivots.insert(lead, r);
                    return true;
                }
            }
        }
    }

    /// Basis of the kernel, one vector per non-pivot column, with a `1` in
    /// that column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        // back-substitute to reduced row-echelon form
        let mut reduced: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        for (&p, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let later: Vec<usize> = r.keys().copied().filter(|&c| c > p && reduced.contains_key(&c)).collect();
            for c in later {
                let f = match r.remove(&c) {
                    Some(f) => f,
                    None => continue,
                };
                for (cc, v) in reduced[&c].iter() {
                    if *cc == c {
                        continue;
                    }
                    let e = r.entry(*cc).or_insert_with(Rational::zero);
                    *e -= &f * v;
                    if e.is_zero() {
                        r.remove(cc);
                    }
                }
            }
            reduced.insert(p, r);
        }
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (&p, row) in &reduced {
                    if let Some(x) = row.get(&free) {
                        v[p] = -x.clone();
                    }
                }
                v
            })
            .collect()
    }
}

pub fn exact_nullspace(rows: &[SparseRow<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut e = ExactEchelon::new(ncols);
    for r in rows {
        if e.rank() == ncols {
            break;
        }
        e.push(r);
    }
    e.kernel()
}

pub fn exact_rank(rows: &[SparseRow<Rational>], ncols: usize) -> usize {
    let mut e = ExactEchelon::new(ncols);
    for r in rows {
        e.push(r);
    }
    e.rank()
}

fn dense(rows: &[SparseRow<f64>], ncols: usize) -> DMatrix<f64> {
    let nrows = rows.len().max(ncols);
    let mut a = DMatrix::zeros(nrows, ncols);
    for (i, r) in rows.iter().enumerate() {
        for (c, v) in r {
            a[(i, *c)] += *v;
        }
    }
    a
}

/// Singular values (descending) and right singular vectors as columns.
fn svd(rows: &[SparseRow<f64>], ncols: usize) -> (Vec<f64>, DMatrix<f64>) {
    let a = dense(rows, ncols);
    let s = a.svd(false, true);
    let vt = s.v_t.expect("requested V^T");
    let mut idx: Vec<usize> = (0..s.singular_values.len()).collect();
    idx.sort_by(|&i, &j| s.singular_values[j].total_cmp(&s.singular_values[i]));
    let sv: Vec<f64> = idx.iter().map(|&i| s.singular_values[i]).collect();
    let v = DMatrix::from_fn(ncols, idx.len(), |r, c| vt[(idx[c], r)]);
    (sv, v)
}

fn rank_threshold(sv: &[f64], tol: &Tolerance) -> Result<(usize, f64)> {
    let smax = sv.first().copied().unwrap_or(0.0);
    let thr = tol.rank * smax;
    if smax == 0.0 {
        return Ok((0, thr));
    }
    if let Some(&near) = sv.iter().find(|&&s| s > thr / 10.0 && s < thr * 10.0) {
        return Err(CmvError::RankAmbiguous {
            threshold: thr,
            nearest: near,
        });
    }
    Ok((sv.iter().filter(|&&s| s > thr).count(), thr))
}

pub fn float_nullspace(rows: &[SparseRow<f64>], ncols: usize, tol: &Tolerance) -> Result<Vec<Vec<f64>>> {
    if ncols == 0 {
        return Ok(Vec::new());
    }
    let (sv, v) = svd(rows, ncols);
    let (rank, _) = rank_threshold(&sv, tol)?;
    Ok((rank..ncols).map(|c| v.column(c).iter().copied().collect()).collect())
}

pub fn float_rank(rows: &[SparseRow<f64>], ncols: usize, tol: &Tolerance) -> Result<usize> {
    if ncols == 0 || rows.is_empty() {
        return Ok(0);
    }
    let (sv, _) = svd(rows, ncols);
    Ok(rank_threshold(&sv, tol)?.0)
}

/// Dispatches nullspace and rank computations to the backend's real field.
pub trait RealLinalg: crate::scalar::RealScalar {
    fn nullspace(rows: &[SparseRow<Self>], ncols: usize, tol: &Tolerance) -> Result<Vec<Vec<Self>>>;
    fn rank(rows: &[SparseRow<Self>], ncols: usize, tol: &Tolerance) -> Result<usize>;
}

impl RealLinalg for Rational {
    fn nullspace(rows: &[SparseRow<Self>], ncols: usize, _tol: &Tolerance) -> Result<Vec<Vec<Self>>> {
        Ok(exact_nullspace(rows, ncols))
    }

    fn rank(rows: &[SparseRow<Self>], ncols: usize, _tol: &Tolerance) -> Result<usize> {
        Ok(exact_rank(rows, ncols))
    }
}

impl RealLinalg for f64 {
    fn nullspace(rows: &[SparseRow<Self>], ncols: usize, tol: &Tolerance) -> Result<Vec<Vec<Self>>> {
        float_nullspace(rows, ncols, tol)
    }

    fn rank(rows: &[SparseRow<Self>], ncols: usize, tol: &Tolerance) -> Result<usize> {
        float_rank(rows, ncols, tol)
    }
}

/// Turns dense vectors into sparse rows.
pub fn to_rows<R: crate::scalar::RealScalar>(vs: &[Vec<R>]) -> Vec<SparseRow<R>> {
    vs.iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(c, x)| (c, x.clone()))
                .collect()
        })
        .collect()
}

/// Whether `target` lies in the span of `basis`.
pub fn in_span<R: RealLinalg>(basis: &[Vec<R>], target: &[R], tol: &Tolerance) -> Result<bool> {
    let ncols = target.len();
    let rows = to_rows(basis);
    let r0 = R::rank(&rows, ncols, tol)?;
    let mut ext = rows;
    ext.extend(to_rows(&[target.to_vec()]));
    Ok(R::rank(&ext, ncols, tol)? == r0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    fn mat_vec(rows: &[SparseRow<Rational>], v: &[Rational]) -> Vec<Rational> {
        rows.iter()
            .map(|r| r.iter().fold(Rational::zero(), |acc, (c, x)| acc + x * &v[*c]))
            .collect()
    }

    #[test]
    fn exact_kernel_of_small_system() {
        // x0 + x1 - x2 = 0, x1 + 2 x3 = 0
        let rows = vec![
            vec![(0, q(1, 1)), (1, q(1, 1)), (2, q(-1, 1))],
            vec![(1, q(1, 1)), (3, q(2, 1))],
        ];
        let k = exact_nullspace(&rows, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&rows, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let rows = vec![
            vec![(0, q(1, 2)), (2, q(1, 3))],
            vec![(0, q(3, 2)), (2, q(1, 1))],
            vec![(1, q(1, 1))],
        ];
        assert_eq!(exact_rank(&rows, 3), 2);
        let k = exact_nullspace(&rows, 3);
        assert_eq!(k, vec![vec![q(-2, 3), q(0, 1), q(1, 1)]]);
    }

    #[test]
    fn float_kernel_matches_exact() {
        let rows = vec![
            vec![(0, 1.0), (1, 1.0), (2, -1.0)],
            vec![(1, 1.0), (3, 2.0)],
            vec![(0, 2.0), (1, 3.0), (2, -2.0), (3, 2.0)],
        ];
        let k = float_nullspace(&rows, 4, &Tolerance::default()).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            for r in &rows {
                let s: f64 = r.iter().map(|(c, x)| x * v[*c]).sum();
                assert!(s.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ambiguous_rank_is_reported() {
        let rows = vec![vec![(0, 1.0)], vec![(1, 5e-9)]];
        assert!(matches!(
            float_nullspace(&rows, 2, &Tolerance::default()),
            Err(CmvError::RankAmbiguous { .. })
        ));
    }

    #[test]
    fn span_membership() {
        let basis = vec![vec![q(1, 1), q(0, 1), q(1, 1)], vec![q(0, 1), q(1, 1), q(1, 1)]];
        let tol = Tolerance::default();
        assert!(in_span(&basis, &[q(2, 1), q(3, 1), q(5, 1)], &tol).unwrap());
        assert!(!in_span(&basis, &[q(1, 1), q(0, 1), q(0, 1)], &tol).unwrap());
    }
}
