//! Recovering the differential operator `D` with `D x = Ω x` from `Ω`, and
//! the forward map from `D` back to `Ω`.

use std::collections::BTreeMap;

use crate::band::BandMatrix;
use crate::diffop::DiffOperator;
use crate::error::{CmvError, Result};
use crate::laurent::LaurentPoly;
use crate::linalg::{RealLinalg, SparseRow};
use crate::olp::{compute_olp, x_order_degree};
use crate::scalar::{RealScalar, Scalar, Tolerance};
use crate::verblunsky::VerblunskySeq;

/// Rows used to validate a fitted operator, beyond the fitted ones.
const VALIDATION_ROWS: usize = 8;

fn fit_rows(r: usize) -> usize {
    2 * (r + 1) + 6
}

/// Position of degree `d` in the order `1, z^-1, z, z^-2, ...`.
fn order_index(d: i64) -> usize {
    if d >= 0 {
        2 * d as usize
    } else {
        2 * d.unsigned_abs() as usize - 1
    }
}

type Bounds = Vec<Option<(i64, i64)>>;
type RowPair<R> = (SparseRow<R>, SparseRow<R>);

/// Degree ranges for `D_0..D_s`: for each `k`, the spread of
/// `deg (Ω x)_n - deg x_n^(k)` over rows `0..=r`.
fn degree_bounds<T: Scalar>(
    ys: &[LaurentPoly<T>],
    derivs: &[Vec<LaurentPoly<T>>],
    s: usize,
    r: usize,
) -> Bounds {
    (0..=s)
        .map(|k| {
            let mut acc: Option<(i64, i64)> = None;
            for n in 0..=r.min(ys.len() - 1) {
                let (Some((ylo, yhi)), Some((xlo, xhi))) = (ys[n].support(), derivs[k][n].support()) else {
                    continue;
                };
                let (lo, hi) = (ylo - xlo, yhi - xhi);
                acc = Some(match acc {
                    None => (lo.min(hi), lo.max(hi)),
                    Some((a, b)) => (a.min(lo).min(hi), b.max(lo).max(hi)),
                });
            }
            acc
        })
        .collect()
}

fn widen(bounds: &Bounds, by: i64) -> Bounds {
    bounds
        .iter()
        .map(|b| Some(b.map_or((-by, by), |(lo, hi)| (lo - by, hi + by))))
        .collect()
}

/// Least-degree-first fit of `sum_k D_k x_n^(k) = y_n` on rows `0..rows`.
fn fit<T: Scalar>(
    ys: &[LaurentPoly<T>],
    derivs: &[Vec<LaurentPoly<T>>],
    bounds: &Bounds,
    rows: usize,
    tol: &Tolerance,
) -> Result<Option<DiffOperator<T>>> {
    let mut cols = Vec::new();
    for (k, b) in bounds.iter().enumerate() {
        if let Some((lo, hi)) = b {
            for e in *lo..=*hi {
                cols.push((k, e));
            }
        }
    }
    let rhs = 2 * cols.len();
    let mut eqs: Vec<SparseRow<T::Real>> = Vec::new();
    for n in 0..rows {
        // degree -> (real row, imaginary row)
        let mut by_deg: BTreeMap<i64, RowPair<T::Real>> = BTreeMap::new();
        for (c, &(k, e)) in cols.iter().enumerate() {
            for (d, w) in derivs[k][n].terms() {
                let (re, im) = by_deg.entry(d + e).or_default();
                re.push((2 * c, w.re()));
                re.push((2 * c + 1, -w.im()));
                im.push((2 * c, w.im()));
                im.push((2 * c + 1, w.re()));
            }
        }
        for (d, y) in ys[n].terms() {
            let (re, im) = by_deg.entry(d).or_default();
            re.push((rhs, -y.re()));
            im.push((rhs, -y.im()));
        }
        for (_, (re, im)) in by_deg {
            eqs.push(re.into_iter().filter(|(_, v)| !v.is_zero()).collect());
            eqs.push(im.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    let kernel = T::Real::nullspace(&eqs, rhs + 1, tol)?;
    let best = kernel
        .iter()
        .filter(|v| !v[rhs].is_zero())
        .max_by(|a, b| a[rhs].to_f64().abs().total_cmp(&b[rhs].to_f64().abs()));
    let Some(v) = best else {
        return Ok(None);
    };
    if !T::EXACT {
        let norm = v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
        if v[rhs].to_f64().abs() <= tol.rank * norm {
            return Ok(None);
        }
    }
    let inv = T::one() / T::from_real(v[rhs].clone());
    let mut coeffs: Vec<Vec<(i64, T)>> = vec![Vec::new(); bounds.len()];
    for (c, &(k, e)) in cols.iter().enumerate() {
        let x = T::from_parts(v[2 * c].clone(), v[2 * c + 1].clone()) * inv.clone();
        if !x.is_negligible(1.0, tol.zero) {
            coeffs[k].push((e, x));
        }
    }
    Ok(Some(DiffOperator::new(
        coeffs.into_iter().map(LaurentPoly::from_terms).collect(),
    )))
}

fn matches<T: Scalar>(a: &LaurentPoly<T>, b: &LaurentPoly<T>, tol: &Tolerance) -> bool {
    let diff = a.sub_ref(b);
    if T::EXACT {
        diff.is_zero()
    } else {
        let scale = a.max_magnitude().max(b.max_magnitude()).max(1.0);
        diff.terms().all(|(_, c)| c.is_negligible(scale, tol.zero))
    }
}

/// Finds `D` of least order `<= r` with `D x_n = sum_j Ω_{nj} x_j` for the
/// rows of `Ω` inside its horizon. Fits on the first rows, validates on
/// further ones, and widens the degree bounds once before giving up.
pub fn reconstruct_operator<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    omega: &BandMatrix<T>,
    r: usize,
    window: usize,
    tol: &Tolerance,
) -> Result<DiffOperator<T>> {
    let fit_n = fit_rows(r);
    let rows = fit_n + VALIDATION_ROWS;
    let available = window.min(omega.horizon()).min(omega.window());
    if rows > available {
        return Err(CmvError::WindowTooSmall {
            reason: format!("reconstruction needs {rows} trusted rows, have {available}"),
        });
    }
    let olp = compute_olp(alpha, rows + omega.upper());
    let ys: Vec<LaurentPoly<T>> = (0..rows)
        .map(|n| {
            let lo = n.saturating_sub(omega.lower());
            (lo..=n + omega.upper()).fold(LaurentPoly::zero(), |acc, j| {
                let w = omega.get(n, j);
                if w.is_zero() {
                    acc
                } else {
                    acc.add_ref(&olp.x[j].scale(&w))
                }
            })
        })
        .collect();
    let mut derivs: Vec<Vec<LaurentPoly<T>>> = vec![olp.x[..rows].to_vec()];
    for k in 1..=r {
        let next = derivs[k - 1].iter().map(|p| p.derivative()).collect();
        derivs.push(next);
    }

    for s in 0..=r {
        let initial = degree_bounds(&ys, &derivs, s, r);
        for bounds in [initial.clone(), widen(&initial, 2)] {
            let Some(d) = fit(&ys, &derivs, &bounds, fit_n, tol)? else {
                continue;
            };
            let ok = (0..rows).all(|n| matches(&d.apply(&olp.x[n]), &ys[n], tol));
            if ok {
                return Ok(d);
            }
        }
    }
    Err(CmvError::NoSolution { order: r })
}

/// The matrix of `D` in the basis `x_0, x_1, ...`: row `n` holds the
/// expansion of `D x_n`. Rows and columns `0..size`.
pub fn operator_matrix<T: Scalar>(
    alpha: &VerblunskySeq<T>,
    d: &DiffOperator<T>,
    size: usize,
    tol: &Tolerance,
) -> Result<BandMatrix<T>> {
    let base = compute_olp(alpha, size);
    let images: Vec<LaurentPoly<T>> = base.x.iter().take(size).map(|x| d.apply(x)).collect();
    let reach = images
        .iter()
        .filter_map(|p| p.support())
        .map(|(lo, hi)| order_index(lo).max(order_index(hi)))
        .max()
        .unwrap_or(0);
    let olp = compute_olp(alpha, reach.max(size));

    let mut entries: Vec<(usize, usize, T)> = Vec::new();
    for (n, img) in images.into_iter().enumerate() {
        let mut p = img;
        loop {
            let top = p
                .terms()
                .filter(|(_, c)| !c.is_negligible(1.0, tol.zero))
                .map(|(deg, _)| (order_index(deg), deg))
                .max();
            let Some((k, deg)) = top else { break };
            let lead = olp.x[k].coeff(x_order_degree(k));
            let c = p.coeff(deg) / lead;
            let rest = p.sub_ref(&olp.x[k].scale(&c));
            p = LaurentPoly::from_terms(rest.terms().filter(|(e, _)| *e != deg).map(|(e, v)| (e, v.clone())));
            entries.push((n, k, c));
        }
    }
    let lower = entries.iter().map(|(n, k, _)| n.saturating_sub(*k)).max().unwrap_or(0);
    let upper = entries.iter().map(|(n, k, _)| k.saturating_sub(*n)).max().unwrap_or(0);
    let mut m = BandMatrix::zeros(size, lower, upper);
    for (n, k, c) in entries {
        if k < size {
            m.set(n, k, c);
        }
    }
    Ok(m)
}
