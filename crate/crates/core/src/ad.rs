//! The ad-operator calculus on CMV matrices.
//!
//! `(ad C)Ω = CΩ - ΩC`. The Hermitian variant `(ad_n C)Ω` strips the unitary
//! factors that make `(ad C)^n Ω` non-Hermitian:
//!
//! - `n = 2m`:   `(C†)^m ((ad C)^n Ω) (C†)^m`
//! - `n = 2m+1`: `L† (C†)^m ((ad C)^n Ω) (C†)^m M†`
//!
//! Both vanish together. Every public entry point that returns an ad image
//! computes it along two independent routes and fails with
//! [`CmvError::CrossCheckFailed`] if they disagree inside the common horizon.

use crate::band::BandMatrix;
use crate::cmv::CmvPair;
use crate::error::{CmvError, Result};
use crate::laurent::LaurentPoly;
use crate::olp::compute_olp;
use crate::scalar::{Scalar, Tolerance};

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, t| acc * (n - t) as i64 / (t + 1) as i64)
}

fn mul3<T: Scalar>(a: &BandMatrix<T>, b: &BandMatrix<T>, c: &BandMatrix<T>) -> Result<BandMatrix<T>> {
    a.mul(b)?.mul(c)
}

/// Magnitude used to scale float zero tests.
pub(crate) fn scale_of<T: Scalar>(ms: &[&BandMatrix<T>]) -> f64 {
    ms.iter().map(|m| m.max_magnitude()).fold(1.0, f64::max)
}

fn same<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    tol: &Tolerance,
    what: &'static str,
) -> Result<()> {
    let scale = scale_of(&[a, b]);
    if a.approx_eq(b, tol, scale)? {
        Ok(())
    } else {
        Err(CmvError::CrossCheckFailed { what })
    }
}

/// `(ad C)^n Ω` by `n` successive commutators.
pub fn ad_power_iterated<T: Scalar>(c: &BandMatrix<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let mut x = omega.clone();
    for _ in 0..n {
        x = c.commutator(&x)?;
    }
    Ok(x)
}

/// `(ad C)^n Ω = sum_k (-1)^k C(n,k) C^(n-k) Ω C^k`.
pub fn ad_power_binomial<T: Scalar>(c: &BandMatrix<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let mut powers = vec![BandMatrix::identity(c.window())];
    for k in 1..=n {
        let next = powers[k - 1].mul(c)?;
        powers.push(next);
    }
    let mut acc: Option<BandMatrix<T>> = None;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let coef = T::from_i64(sign * binomial(n, k));
        let term = mul3(&powers[n - k], omega, &powers[k])?;
        acc = Some(match acc {
            None => term.scale(&coef),
            Some(a) => a.add_scaled(&coef, &term)?,
        });
    }
    Ok(acc.expect("n + 1 >= 1 terms"))
}

/// `(ad C)^n Ω`, cross-checked between the iterated and binomial forms.
pub fn ad_power<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    ad_power_with(pair, omega, n, &Tolerance::default())
}

pub fn ad_power_with<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    n: usize,
    tol: &Tolerance,
) -> Result<BandMatrix<T>> {
    let it = ad_power_iterated(&pair.c, omega, n)?;
    let bi = ad_power_binomial(&pair.c, omega, n)?;
    same(&it, &bi, tol, "ad power: iterated vs binomial")?;
    Ok(it)
}

/// `(ad_n C)Ω` by the two-branch recursion from `(ad_0 C)Ω = Ω`:
/// `X -> M X M† - L† X L` after an even number of steps,
/// `X -> L X L† - M† X M` after an odd number.
pub fn hermitian_ad_recursive<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let (l, m) = (&pair.l, &pair.m);
    let (ld, md) = (l.dagger(), m.dagger());
    let mut x = omega.clone();
    for j in 0..n {
        x = if j % 2 == 0 {
            mul3(m, &x, &md)?.sub(&mul3(&ld, &x, l)?)?
        } else {
            mul3(l, &x, &ld)?.sub(&mul3(&md, &x, m)?)?
        };
    }
    Ok(x)
}

/// `(ad_n C)Ω` straight from the definition, on top of `(ad C)^n Ω`.
pub fn hermitian_ad_direct<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let adn = ad_power_iterated(&pair.c, omega, n)?;
    hermitian_from_power(pair, &adn, n)
}

/// Conjugates a given `(ad C)^n Ω` into `(ad_n C)Ω`.
fn hermitian_from_power<T: Scalar>(pair: &CmvPair<T>, adn: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let cd = pair.c.dagger();
    let mut x = adn.clone();
    for _ in 0..n / 2 {
        x = mul3(&cd, &x, &cd)?;
    }
    if n % 2 == 1 {
        x = mul3(&pair.l.dagger(), &x, &pair.m.dagger())?;
    }
    Ok(x)
}

/// `(ad_n C)Ω` for `n <= 4` from the expanded words in `L`, `M`:
///
/// - `ad_1 = MΩM† - L†ΩL`
/// - `ad_2 = LMΩM†L† - 2Ω + M†L†ΩLM`
/// - `ad_3 = MLMΩM†L†M† - 3MΩM† + 3L†ΩL - L†M†L†ΩLML`
/// - `ad_4 = LMLMΩM†L†M†L† - 4LMΩM†L† + 6Ω - 4M†L†ΩLM + M†L†M†L†ΩLMLM`
///
/// Returns `None` for larger `n`.
pub fn hermitian_ad_explicit<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    n: usize,
) -> Option<Result<BandMatrix<T>>> {
    (n <= 4).then(|| explicit_words(pair, omega, n))
}

fn explicit_words<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    let (l, m) = (&pair.l, &pair.m);
    let (ld, md) = (l.dagger(), m.dagger());
    // conj(w) Ω w† for a word w given left to right
    let sandwich = |word: &[&BandMatrix<T>], daggers: &[&BandMatrix<T>]| -> Result<BandMatrix<T>> {
        let mut x = omega.clone();
        for (a, ad) in word.iter().rev().zip(daggers.iter()) {
            x = mul3(a, &x, ad)?;
        }
        Ok(x)
    };
    let term = |c: i64, word: &[&BandMatrix<T>], daggers: &[&BandMatrix<T>]| -> Result<(T, BandMatrix<T>)> {
        Ok((T::from_i64(c), sandwich(word, daggers)?))
    };
    let terms: Vec<(T, BandMatrix<T>)> = match n {
        0 => vec![(T::one(), omega.clone())],
        1 => vec![term(1, &[m], &[&md])?, term(-1, &[&ld], &[l])?],
        2 => vec![
            term(1, &[l, m], &[&md, &ld])?,
            term(-2, &[], &[])?,
            term(1, &[&md, &ld], &[l, m])?,
        ],
        3 => vec![
            term(1, &[m, l, m], &[&md, &ld, &md])?,
            term(-3, &[m], &[&md])?,
            term(3, &[&ld], &[l])?,
            term(-1, &[&ld, &md, &ld], &[l, m, l])?,
        ],
        _ => vec![
            term(1, &[l, m, l, m], &[&md, &ld, &md, &ld])?,
            term(-4, &[l, m], &[&md, &ld])?,
            term(6, &[], &[])?,
            term(-4, &[&md, &ld], &[l, m])?,
            term(1, &[&md, &ld, &md, &ld], &[l, m, l, m])?,
        ],
    };
    let mut it = terms.into_iter();
    let (c0, t0) = it.next().expect("nonempty");
    it.try_fold(t0.scale(&c0), |acc, (c, t)| acc.add_scaled(&c, &t))
}

/// `(ad_n C)Ω`, cross-checked between the recursion and the definition.
pub fn hermitian_ad<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<BandMatrix<T>> {
    hermitian_ad_with(pair, omega, n, &Tolerance::default())
}

pub fn hermitian_ad_with<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    n: usize,
    tol: &Tolerance,
) -> Result<BandMatrix<T>> {
    let rec = hermitian_ad_recursive(pair, omega, n)?;
    let adn = ad_power_with(pair, omega, n, tol)?;
    let direct = hermitian_from_power(pair, &adn, n)?;
    same(&rec, &direct, tol, "hermitian ad: recursion vs definition")?;
    Ok(rec)
}

/// Outcome of one identity check: whether it holds and the largest residual
/// entry relative to the operand scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelationCheck {
    pub holds: bool,
    pub residual: f64,
}

/// The identity suite for one `(pair, Ω, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianRelations {
    /// `(ad C)^n Ω† = C^n ((ad C)^n Ω)† C^n`.
    pub adjoint_symmetry: RelationCheck,
    /// `(ad_n C)Ω† = ((ad_n C)Ω)†`.
    pub hermitian_adjoint: RelationCheck,
    /// Definition and recursion agree.
    pub definition_vs_recursion: RelationCheck,
    /// The expanded word forms agree with the recursion (`n <= 4`, else `None`).
    pub explicit_form: Option<RelationCheck>,
    /// `((ad_n C)Ω)^t = (-1)^n (ad_n Ct)Ω^t`.
    pub transpose: RelationCheck,
    /// `(ad_n C)(LΩM) = L((ad_n Ct)Ω)M` (even n), `M((ad_n Ct)Ω)L` (odd n).
    pub conjugation: RelationCheck,
    /// `(ad_n C)Ω = (ad_{n-k} C(k))((ad_k C)Ω)` for every `0 <= k <= n`.
    pub factorization: RelationCheck,
}

impl HermitianRelations {
    pub fn all_hold(&self) -> bool {
        [
            self.adjoint_symmetry,
            self.hermitian_adjoint,
            self.definition_vs_recursion,
            self.transpose,
            self.conjugation,
            self.factorization,
        ]
        .iter()
        .chain(self.explicit_form.iter())
        .all(|c| c.holds)
    }
}

fn check<T: Scalar>(a: &BandMatrix<T>, b: &BandMatrix<T>, scale: f64, tol: &Tolerance) -> Result<RelationCheck> {
    let residual = a.max_abs_diff(b)? / scale;
    let holds = if T::EXACT {
        a.sub(b)?.is_zero()
    } else {
        residual <= tol.zero
    };
    Ok(RelationCheck { holds, residual })
}

pub fn hermitian_relations_check<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    n: usize,
    tol: &Tolerance,
) -> Result<HermitianRelations> {
    let scale = scale_of(&[omega]) * (1u64 << (2 * n).min(60)) as f64;
    let tp = pair.transposed();

    let adn = ad_power_iterated(&pair.c, omega, n)?;
    let adn_dag = ad_power_iterated(&pair.c, &omega.dagger(), n)?;
    let mut cn = BandMatrix::identity(pair.window());
    for _ in 0..n {
        cn = cn.mul(&pair.c)?;
    }
    let adjoint_symmetry = check(&adn_dag, &mul3(&cn, &adn.dagger(), &cn)?, scale, tol)?;

    let h = hermitian_ad_recursive(pair, omega, n)?;
    let h_dag = hermitian_ad_recursive(pair, &omega.dagger(), n)?;
    let hermitian_adjoint = check(&h_dag, &h.dagger(), scale, tol)?;

    let direct = hermitian_from_power(pair, &adn, n)?;
    let definition_vs_recursion = check(&direct, &h, scale, tol)?;

    let explicit_form = match hermitian_ad_explicit(pair, omega, n) {
        Some(e) => Some(check(&e?, &h, scale, tol)?),
        None => None,
    };

    let sign = T::from_i64(if n.is_multiple_of(2) { 1 } else { -1 });
    let ht = hermitian_ad_recursive(&tp, &omega.transpose(), n)?.scale(&sign);
    let transpose = check(&h.transpose(), &ht, scale, tol)?;

    let lhs = hermitian_ad_recursive(pair, &mul3(&pair.l, omega, &pair.m)?, n)?;
    let inner = hermitian_ad_recursive(&tp, omega, n)?;
    let rhs = if n.is_multiple_of(2) {
        mul3(&pair.l, &inner, &pair.m)?
    } else {
        mul3(&pair.m, &inner, &pair.l)?
    };
    let conjugation = check(&lhs, &rhs, scale, tol)?;

    let mut factorization = RelationCheck {
        holds: true,
        residual: 0.0,
    };
    for k in 0..=n {
        let first = hermitian_ad_recursive(pair, omega, k)?;
        let second = hermitian_ad_recursive(&pair.parity(k), &first, n - k)?;
        let c = check(&h, &second, scale, tol)?;
        factorization.holds &= c.holds;
        factorization.residual = factorization.residual.max(c.residual);
    }

    Ok(HermitianRelations {
        adjoint_symmetry,
        hermitian_adjoint,
        definition_vs_recursion,
        explicit_form,
        transpose,
        conjugation,
        factorization,
    })
}

/// The iterates `Ω(0) = Ω`, `Ω(k+1) = (ad_1 C(k)) Ω(k)` for `k < n`; the
/// last one equals `(ad_n C)Ω`.
pub fn ad_cascade<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<Vec<BandMatrix<T>>> {
    let mut out = vec![omega.clone()];
    for k in 0..n {
        let next = hermitian_ad_recursive(&pair.parity(k), &out[k], 1)?;
        out.push(next);
    }
    Ok(out)
}

/// Recovers `f` with `Ω = f(C)` for `Ω` commuting with `C`, using
/// `f(z) x_0(z) = sum_k Ω_{0,k} x_k(z)`.
pub fn centralizer_symbol<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>) -> Result<LaurentPoly<T>> {
    centralizer_symbol_with(pair, omega, &Tolerance::default())
}

pub fn centralizer_symbol_with<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    tol: &Tolerance,
) -> Result<LaurentPoly<T>> {
    let scale = scale_of(&[omega]);
    if !pair.c.commutator(omega)?.is_zero_with(tol, scale) {
        return Err(CmvError::NotInCentralizer);
    }
    let h = omega.horizon().min(pair.window());
    let (_, upper) = omega.band_profile(tol, scale);
    let count = upper.min(h.saturating_sub(1));
    let olp = compute_olp(&pair.alpha, count);
    let basis = if pair.flipped { &olp.chi } else { &olp.x };
    let mut f = LaurentPoly::zero();
    for (k, p) in basis.iter().enumerate().take(count + 1) {
        let w = omega.get(0, k);
        if !w.is_zero() {
            f = f.add_ref(&p.scale(&w));
        }
    }
    let rebuilt = eval_at_operator(&pair.c, &f)?;
    if omega.approx_eq(&rebuilt, tol, scale)? {
        Ok(f)
    } else {
        Err(CmvError::ReconstructionMismatch)
    }
}

/// `f(C) = sum_d f_d C^d` with `C^-1 = C†`.
pub fn eval_at_operator<T: Scalar>(c: &BandMatrix<T>, f: &LaurentPoly<T>) -> Result<BandMatrix<T>> {
    let n = c.window();
    let mut acc = BandMatrix::zeros(n, 0, 0);
    let Some((lo, hi)) = f.support() else {
        return Ok(acc);
    };
    let cd = c.dagger();
    let id = BandMatrix::identity(n);
    let (mut pos, mut neg) = (id.clone(), id);
    for d in 0..=hi.max(0) {
        if d > 0 {
            pos = pos.mul(c)?;
        }
        let coef = f.coeff(d);
        if !coef.is_zero() {
            acc = acc.add_scaled(&coef, &pos)?;
        }
    }
    for d in 1..=(-lo).max(0) {
        neg = neg.mul(&cd)?;
        let coef = f.coeff(-d);
        if !coef.is_zero() {
            acc = acc.add_scaled(&coef, &neg)?;
        }
    }
    Ok(acc)
}

/// For tridiagonal `Ω` with `(ad_n C)Ω = aI`, returns `a`.
pub fn ad_integrate<T: Scalar>(pair: &CmvPair<T>, omega: &BandMatrix<T>, n: usize) -> Result<T> {
    ad_integrate_with(pair, omega, n, &Tolerance::default())
}

pub fn ad_integrate_with<T: Scalar>(
    pair: &CmvPair<T>,
    omega: &BandMatrix<T>,
    n: usize,
    tol: &Tolerance,
) -> Result<T> {
    let scale = scale_of(&[omega]);
    let (below, above) = omega.band_profile(tol, scale);
    if below > 1 || above > 1 {
        return Err(CmvError::NotTridiagonal);
    }
    let x = hermitian_ad_with(pair, omega, n, tol)?;
    let a = x.get(0, 0);
    let id = BandMatrix::identity(x.window()).scale(&a);
    if x.approx_eq(&id, tol, scale_of(&[&x, omega]))? {
        Ok(a)
    } else {
        Err(CmvError::NotConstantMultiple)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::{build_cmv, lebesgue_solution};
    use crate::scalar::{ExactComplex, FloatComplex};
    use crate::verblunsky::VerblunskySeq;

    type Q = ExactComplex;

    fn q(a: i64, b: i64) -> Q {
        Q::from_ratio(a, b)
    }

    fn three_fifths() -> VerblunskySeq<Q> {
        VerblunskySeq::constant(q(3, 5)).unwrap()
    }

    #[test]
    fn identity_is_annihilated() {
        let p = build_cmv(&three_fifths(), 24).unwrap();
        let id = BandMatrix::identity(24);
        for n in 1..=3 {
            assert!(ad_power(&p, &id, n).unwrap().is_zero());
            assert!(hermitian_ad(&p, &id, n).unwrap().is_zero());
        }
    }

    #[test]
    fn lebesgue_diagonal_solves_order_two() {
        let p = build_cmv(&VerblunskySeq::<Q>::zero(), 30).unwrap();
        let lam = lebesgue_solution(30);
        assert!(ad_power(&p, &lam, 2).unwrap().is_zero());
        assert!(!p.c.commutator(&lam).unwrap().is_zero());
        let p35 = build_cmv(&three_fifths(), 30).unwrap();
        assert!(!ad_power(&p35, &lam, 2).unwrap().is_zero());
    }

    #[test]
    fn first_order_on_lebesgue_is_identity() {
        let p = build_cmv(&VerblunskySeq::<Q>::zero(), 20).unwrap();
        let x = hermitian_ad(&p, &lebesgue_solution(20), 1).unwrap();
        assert!(x.sub(&BandMatrix::identity(20)).unwrap().is_zero());
    }

    #[test]
    fn ad_integrate_examples() {
        let zero = build_cmv(&VerblunskySeq::<Q>::zero(), 20).unwrap();
        assert_eq!(ad_integrate(&zero, &lebesgue_solution(20), 1).unwrap(), Q::one());
        let p = build_cmv(&three_fifths(), 20).unwrap();
        assert_eq!(ad_integrate(&p, &BandMatrix::identity(20), 2).unwrap(), Q::zero());
        assert_eq!(
            ad_integrate(&p, &lebesgue_solution(20), 1),
            Err(CmvError::NotConstantMultiple)
        );
        let wide = BandMatrix::<Q>::from_fn(20, 0, 2, |i, j| if j == i + 2 { Q::one() } else { Q::zero() });
        assert_eq!(ad_integrate(&p, &wide, 1), Err(CmvError::NotTridiagonal));
    }

    #[test]
    fn centralizer_examples() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(6, 9);
        let p = build_cmv(&alpha, 30).unwrap();
        let c2 = p.c.mul(&p.c).unwrap();
        let omega = c2.add(&BandMatrix::identity(30).scale(&q(2, 1))).unwrap();
        let f = centralizer_symbol(&p, &omega).unwrap();
        assert_eq!(f, LaurentPoly::from_terms([(2, q(1, 1)), (0, q(2, 1))]));
        let f = centralizer_symbol(&p, &p.c.dagger()).unwrap();
        assert_eq!(f, LaurentPoly::monomial(Q::one(), -1));
        let z = build_cmv(&VerblunskySeq::<Q>::zero(), 20).unwrap();
        assert_eq!(
            centralizer_symbol(&z, &lebesgue_solution(20)),
            Err(CmvError::NotInCentralizer)
        );
    }

    #[test]
    fn centralizer_of_transposed_pair_uses_chi() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(6, 2);
        let p = build_cmv(&alpha, 30).unwrap().transposed();
        let omega = p.c.add(&p.c.dagger()).unwrap();
        let f = centralizer_symbol(&p, &omega).unwrap();
        assert_eq!(f, LaurentPoly::from_terms([(1, q(1, 1)), (-1, q(1, 1))]));
    }

    #[test]
    fn cascade_ends_at_hermitian_ad() {
        let alpha = VerblunskySeq::<Q>::random_pythagorean(6, 4);
        let p = build_cmv(&alpha, 30).unwrap();
        let lam = BandMatrix::from_diagonal((0..30).map(|k| q(k as i64 * k as i64 % 7, 3)).collect());
        let steps = ad_cascade(&p, &lam, 3).unwrap();
        let direct = hermitian_ad(&p, &lam, 3).unwrap();
        assert!(steps[3].sub(&direct).unwrap().is_zero());
    }

    #[test]
    fn relations_hold_float() {
        let alpha = VerblunskySeq::constant(FloatComplex::new(0.3, -0.4)).unwrap();
        let p = build_cmv(&alpha, 30).unwrap();
        let omega = BandMatrix::from_fn(30, 1, 1, |i, j| {
            FloatComplex::new((i + 2 * j) as f64 / 7.0, (i as f64 - j as f64) / 5.0)
        });
        let r = hermitian_relations_check(&p, &omega, 3, &Tolerance::default()).unwrap();
        assert!(r.all_hold(), "{r:?}");
    }
}
