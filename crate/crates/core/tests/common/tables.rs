//! The difference equations read off `(ad_n C)Λ = 0` for real diagonal `Λ`,
//! one family per diagonal, with the matrix entry each one lives in.
//!
//! A form is a vector of complex coefficients over `λ_0..λ_{W-1}`; the
//! equation is `form · λ = 0`.

use cmv_core::ad::hermitian_ad_recursive;
use cmv_core::linalg::{exact_nullspace, SparseRow};
use cmv_core::scalar::RealScalar;
use cmv_core::{build_cmv, BandMatrix, Rational, Scalar, VerblunskySeq};

use super::Q;

#[derive(Clone, Debug)]
pub struct TableEquation {
    pub label: String,
    /// Offset above the main diagonal.
    pub offset: usize,
    pub row: usize,
    pub form: Vec<Q>,
}

fn form(width: usize, terms: &[(usize, i64)], scale: &Q) -> Option<Vec<Q>> {
    let mut v = vec![Q::zero(); width];
    for &(i, c) in terms {
        if i >= width {
            return None;
        }
        v[i] = v[i].clone() + Q::from_i64(c) * scale.clone();
    }
    Some(v)
}

/// Every equation whose indices fit in `width`, for `n = 2` or `n = 3`.
pub fn equations(n: usize, alpha: &VerblunskySeq<Q>, width: usize) -> Vec<TableEquation> {
    let a = |k: usize| alpha.alpha(k);
    let one = Q::one();
    let mut out = Vec::new();
    let mut push = |label: String, offset: usize, row: usize, f: Option<Vec<Q>>| {
        if let Some(form) = f {
            out.push(TableEquation { label, offset, row, form });
        }
    };
    let big = width;
    match n {
        2 => {
            for k in 1..big {
                push(format!("(l[{}]-l[{k}])a[{k}]", k + 1), 3, k - 1, form(width, &[(k + 1, 1), (k, -1)], &a(k)));
            }
            push("(l1-l0)a0".into(), 2, 0, form(width, &[(1, 1), (0, -1)], &a(0)));
            push("(l2-l0)a0".into(), 1, 0, form(width, &[(2, 1), (0, -1)], &a(0)));
            for k in 1..big {
                push(format!("(l[{}]-l[{}])a[{k}]", k + 2, k - 1), 1, k, form(width, &[(k + 2, 1), (k - 1, -1)], &a(k)));
            }
            push("l2-2l0+l1".into(), 0, 0, form(width, &[(2, 1), (0, -2), (1, 1)], &one));
            push("l3-2l1+l0".into(), 0, 1, form(width, &[(3, 1), (1, -2), (0, 1)], &one));
            for k in 0..big {
                push(
                    format!("l[{}]-2l[{}]+l[{k}]", k + 4, k + 2),
                    0,
                    k + 2,
                    form(width, &[(k + 4, 1), (k + 2, -2), (k, 1)], &one),
                );
            }
        }
        3 => {
            for k in 2..big {
                push(format!("(l[{}]-l[{k}])a[{k}]", k + 1), 5, k - 2, form(width, &[(k + 1, 1), (k, -1)], &a(k)));
            }
            push("(l2-l1)a1".into(), 4, 0, form(width, &[(2, 1), (1, -1)], &a(1)));
            // (λ3 - λ0)α1 - (λ1 - λ0)α0(conj(α0)α1 - α0)
            let c = a(0) * (a(0).conj() * a(1) - a(0));
            let f = form(width, &[(3, 1), (0, -1)], &a(1)).zip(form(width, &[(1, 1), (0, -1)], &c));
            push(
                "(l3-l0)a1-(l1-l0)a0(conj(a0)a1-a0)".into(),
                3,
                0,
                f.map(|(x, y)| x.into_iter().zip(y).map(|(u, v)| u - v).collect()),
            );
            for k in 2..big {
                push(format!("(l[{}]-l[{}])a[{k}]", k + 2, k - 1), 3, k - 1, form(width, &[(k + 2, 1), (k - 1, -1)], &a(k)));
            }
            push("(l2-l0)a0".into(), 2, 0, form(width, &[(2, 1), (0, -1)], &a(0)));
            push("(l1-l0)a0".into(), 2, 1, form(width, &[(1, 1), (0, -1)], &a(0)));
            push("(l3-l0)a0".into(), 1, 0, form(width, &[(3, 1), (0, -1)], &a(0)));
            push("(l4-l0)a1".into(), 1, 1, form(width, &[(4, 1), (0, -1)], &a(1)));
            for k in 2..big {
                push(format!("(l[{}]-l[{}])a[{k}]", k + 3, k - 2), 1, k, form(width, &[(k + 3, 1), (k - 2, -1)], &a(k)));
            }
            push("l3-3l1+3l0-l2".into(), 0, 0, form(width, &[(3, 1), (1, -3), (0, 3), (2, -1)], &one));
            push("l4-3l2+3l0-l1".into(), 0, 1, form(width, &[(4, 1), (2, -3), (0, 3), (1, -1)], &one));
            push("l5-3l3+3l1-l0".into(), 0, 2, form(width, &[(5, 1), (3, -3), (1, 3), (0, -1)], &one));
            for k in 0..big {
                push(
                    format!("l[{}]-3l[{}]+3l[{}]-l[{k}]", k + 6, k + 4, k + 2),
                    0,
                    k + 3,
                    form(width, &[(k + 6, 1), (k + 4, -3), (k + 2, 3), (k, -1)], &one),
                );
            }
        }
        _ => panic!("tables exist for n = 2, 3"),
    }
    out
}

/// Verblunsky sequences that switch the table equations on and off.
pub fn alpha_patterns() -> Vec<(String, VerblunskySeq<Q>)> {
    let c = super::complex_value();
    let mut out = vec![
        ("zero".to_string(), VerblunskySeq::zero()),
        ("constant complex".to_string(), VerblunskySeq::constant(c.clone()).unwrap()),
        ("constant -3/5".to_string(), VerblunskySeq::constant(super::q(-3, 5)).unwrap()),
        (
            "complex pair".to_string(),
            VerblunskySeq::list(vec![c.clone(), cmv_core::verblunsky::pythagorean(1, 3, 5, 12, 13)]).unwrap(),
        ),
        ("real pair".to_string(), VerblunskySeq::list(vec![super::q(3, 5), super::q(5, 13)]).unwrap()),
        (
            "real triple".to_string(),
            VerblunskySeq::list(vec![super::q(3, 5), super::q(5, 13), super::q(-4, 5)]).unwrap(),
        ),
    ];
    for j in 0..=9 {
        let mut v = vec![Q::zero(); j + 1];
        v[j] = c.clone();
        out.push((format!("single a[{j}]"), VerblunskySeq::list(v).unwrap()));
    }
    for seed in 0..3 {
        out.push((format!("random list {seed}"), VerblunskySeq::random_pythagorean(16, seed)));
    }
    out
}

/// Result of checking one equation against its entry for one `α`.
#[derive(Clone, Debug)]
pub struct EquationCheck {
    pub label: String,
    /// Every `Λ` satisfying the equation (and the higher diagonals) makes
    /// the entry vanish.
    pub satisfied_vanishes: bool,
    /// `Some(true)` if a `Λ` violating only this equation makes the entry
    /// nonzero; `None` if no such `Λ` exists for this `α`.
    pub violated_nonzero: Option<bool>,
}

fn real_rows(forms: &[&Vec<Q>]) -> Vec<SparseRow<Rational>> {
    let mut rows = Vec::new();
    for f in forms {
        for part in [0, 1] {
            rows.push(
                f.iter()
                    .enumerate()
                    .filter_map(|(i, c)| {
                        let v = if part == 0 { c.re() } else { c.im() };
                        (!v.is_zero()).then_some((i, v))
                    })
                    .collect(),
            );
        }
    }
    rows
}

fn apply(form: &[Q], lambda: &[Rational]) -> Q {
    form.iter()
        .zip(lambda)
        .fold(Q::zero(), |acc, (c, l)| acc + c.clone() * Q::from_real(l.clone()))
}

fn combine(basis: &[Vec<Rational>], coeffs: &[Rational], width: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); width];
    for (b, c) in basis.iter().zip(coeffs) {
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    v
}

/// Entry `(i, j)` of `(ad_n C)Λ`, computed on a window just large enough
/// to trust it.
fn direct_entry(alpha: &VerblunskySeq<Q>, lambda: &[Rational], n: usize, i: usize, j: usize) -> Q {
    let window = j + 4 * n + 8;
    let pair = build_cmv(alpha, window).unwrap();
    let mut d: Vec<Q> = lambda.iter().take(window).cloned().map(Q::from_real).collect();
    d.resize(window, Q::zero());
    let image = hermitian_ad_recursive(&pair, &BandMatrix::from_diagonal(d), n).unwrap();
    assert!(j < image.horizon(), "entry ({i}, {j}) outside the horizon");
    image.get(i, j)
}

/// Checks every equation with `row <= max_row` for one `α`. Each equation
/// is tested on the `Λ` that satisfy all equations on strictly higher
/// diagonals.
pub fn check_alpha(n: usize, alpha: &VerblunskySeq<Q>, width: usize, max_row: usize) -> Vec<EquationCheck> {
    let window = width + 4 * n + 12;
    let pair = build_cmv(alpha, window).unwrap();
    // entry forms: image of each unit diagonal
    let units: Vec<BandMatrix<Q>> = (0..width)
        .map(|m| {
            let mut d = vec![Q::zero(); window];
            d[m] = Q::one();
            hermitian_ad_recursive(&pair, &BandMatrix::from_diagonal(d), n).unwrap()
        })
        .collect();
    let eqs = equations(n, alpha, width);
    let mut out = Vec::new();
    // feasible Λ for each offset: all equations on strictly higher diagonals
    let mut feasible_at: std::collections::BTreeMap<usize, Vec<Vec<Rational>>> = Default::default();
    for eq in eqs.iter().filter(|e| e.row <= max_row) {
        let (i, j) = (eq.row, eq.row + eq.offset);
        let entry: Vec<Q> = units.iter().map(|u| u.get(i, j)).collect();
        let feasible = feasible_at.entry(eq.offset).or_insert_with(|| {
            let higher: Vec<&Vec<Q>> = eqs.iter().filter(|e| e.offset > eq.offset).map(|e| &e.form).collect();
            exact_nullspace(&real_rows(&higher), width)
        });

        // satisfying Λ: feasible combinations on which the equation vanishes
        let values: Vec<Q> = feasible.iter().map(|l| apply(&eq.form, l)).collect();
        let reduced = real_rows(&[&values]);
        let satisfying: Vec<Vec<Rational>> = exact_nullspace(&reduced, feasible.len())
            .iter()
            .map(|c| combine(feasible, c, width))
            .collect();
        let satisfied_vanishes = satisfying.iter().all(|l| apply(&entry, l).is_zero());

        let violating = feasible.iter().find(|l| !apply(&eq.form, l).is_zero());
        let violated_nonzero = violating.map(|l| !direct_entry(alpha, l, n, i, j).is_zero());
        // a generic satisfying combination, also through the full operator
        if satisfied_vanishes && !satisfying.is_empty() {
            let coeffs: Vec<Rational> = (0..satisfying.len()).map(|t| Rational::from_ratio(t as i64 + 2, 3)).collect();
            let l = combine(&satisfying, &coeffs, width);
            assert!(
                direct_entry(alpha, &l, n, i, j).is_zero(),
                "{}: direct evaluation disagrees",
                eq.label
            );
        }
        out.push(EquationCheck {
            label: eq.label.clone(),
            satisfied_vanishes,
            violated_nonzero,
        });
    }
    out
}

/// Runs [`check_alpha`] over [`alpha_patterns`]. Returns the failures and
/// the labels never exercised in the violating direction.
pub fn check_tables(n: usize, width: usize, max_row: usize) -> (Vec<String>, Vec<String>) {
    let mut failures = Vec::new();
    let mut exercised: std::collections::BTreeMap<String, bool> = Default::default();
    for (name, alpha) in alpha_patterns() {
        for c in check_alpha(n, &alpha, width, max_row) {
            if !c.satisfied_vanishes {
                failures.push(format!("{name}: {} holds but its entry is nonzero", c.label));
            }
            if c.violated_nonzero == Some(false) {
                failures.push(format!("{name}: {} fails but its entry vanishes", c.label));
            }
            *exercised.entry(c.label).or_insert(false) |= c.violated_nonzero.is_some();
        }
    }
    let unexercised = exercised.into_iter().filter(|(_, v)| !v).map(|(k, _)| k).collect();
    (failures, unexercised)
}
