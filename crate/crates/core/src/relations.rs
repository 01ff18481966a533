//! Residual checks for the recurrence, compatibility and Christoffel-Darboux
//! identities satisfied by the four polynomial families.
//!
//! Every check expands both sides as Laurent polynomials (or as scalars for
//! coefficient identities) and compares them coefficientwise. Indices that
//! leave the cone or are not normal turn a check into a skip.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::index::IndexPair;
use crate::laurent::LaurentMop;
use crate::polynomial::{vector, LaurentPoly, TypeIVector};
use crate::report::{check_identity, check_identity_scaled, constant, VerificationReport};
use crate::scalar::{GaussianRational, Scalar};

type Poly<S> = LaurentPoly<S>;
type Sides<S> = (Vec<Poly<S>>, Vec<Poly<S>>);

fn inside(idx: Option<IndexPair>, what: &str) -> Result<IndexPair> {
    idx.ok_or_else(|| Error::InvalidIndex(what.to_string()))
}

fn params_k(k: usize) -> String {
    format!("k={}", k + 1)
}

fn params_kl(k: usize, l: usize) -> String {
    format!("k={},l={}", k + 1, l + 1)
}

/// `c z^s p`.
fn cz<S: Scalar>(p: &Poly<S>, c: &S, s: i64) -> Poly<S> {
    p.scale(c).shift(s)
}

/// `Phi_{idx}`, or 0 when `idx` left the cone (the formal convention).
fn phi_or_zero<S: Scalar>(mop: &LaurentMop<S>, idx: Option<IndexPair>) -> Result<Poly<S>> {
    match idx {
        Some(i) => mop.type_ii(&i),
        None => Ok(Poly::zero()),
    }
}

fn phi_star_or_zero<S: Scalar>(mop: &LaurentMop<S>, idx: Option<IndexPair>) -> Result<Poly<S>> {
    match idx {
        Some(i) => mop.type_ii_star(&i),
        None => Ok(Poly::zero()),
    }
}

/// The sum of `terms` and the largest term magnitude.
fn sum_terms<S: Scalar>(terms: Vec<S>) -> (S, f64) {
    let size = terms.iter().map(Scalar::magnitude).fold(0.0, f64::max);
    (terms.into_iter().fold(S::zero(), |a, b| a + b), size)
}

fn vec_magnitude<S: Scalar>(v: &[Poly<S>]) -> f64 {
    v.iter().map(Poly::max_magnitude).fold(0.0, f64::max)
}

/// Terms of `p` outside `z^{lo..hi}`.
fn outside<S: Scalar>(p: &Poly<S>, lo: i64, hi: i64) -> Poly<S> {
    let mut out = Poly::zero();
    for (e, c) in p.terms() {
        if e < lo || e > hi {
            out.add_term(e, c.clone());
        }
    }
    out
}

/// The defining conditions of the four families, evaluated directly against
/// the moments: every orthogonality pairing, the normalizing coefficient and
/// the part of each polynomial outside its span. Each side is compared with
/// the exact target (zeros, then one, then zero).
pub fn verify_orthogonality<S: Scalar>(mop: &LaurentMop<S>, idx: &IndexPair) -> Result<Vec<VerificationReport>> {
    let r = mop.r();
    let (big_n, big_m) = (idx.abs_n(), idx.abs_m());
    let i = Some(idx);
    // `zeros` vanishing pairings, the unit, then `spill` empty remainders
    let expect = |zeros: usize, spill: usize| -> Vec<Poly<S>> {
        let mut v = vec![Poly::zero(); zeros];
        v.push(Poly::one());
        v.extend(vec![Poly::zero(); spill]);
        v
    };
    let mut out = Vec::new();
    out.push(check_identity("orthogonality: Phi", i, "", || -> Result<Sides<S>> {
        let phi = mop.type_ii(idx)?;
        let mut lhs = Vec::new();
        for j in 0..r {
            for k in -idx.m[j]..idx.n[j] {
                lhs.push(Poly::monomial(0, mop.pair(j, &phi, k)?));
            }
        }
        let zeros = lhs.len();
        lhs.push(Poly::monomial(0, phi.coeff(big_n)));
        lhs.push(outside(&phi, -big_m, big_n));
        Ok((lhs, expect(zeros, 1)))
    })?);
    out.push(check_identity("orthogonality: Phi*", i, "", || -> Result<Sides<S>> {
        let phi = mop.type_ii_star(idx)?;
        let mut lhs = Vec::new();
        for j in 0..r {
            for k in -idx.m[j] + 1..=idx.n[j] {
                lhs.push(Poly::monomial(0, mop.pair(j, &phi, k)?));
            }
        }
        let zeros = lhs.len();
        lhs.push(Poly::monomial(0, phi.coeff(-big_m)));
        lhs.push(outside(&phi, -big_m, big_n));
        Ok((lhs, expect(zeros, 1)))
    })?);
    let type_i = |star: bool| -> Result<Sides<S>> {
        if idx.is_boundary() {
            return Err(Error::HypothesisViolated("boundary index carries no type I data".into()));
        }
        let s = i64::from(star);
        let xi = if star { mop.type_i_star(idx)? } else { mop.type_i(idx)? };
        let (first, last) = (-big_n + s, big_m - 1 + s);
        let unit = if star { last } else { first };
        let mut lhs = Vec::new();
        let mut unit_value = S::zero();
        for k in first..=last {
            let mut sum = S::zero();
            for (j, x) in xi.iter().enumerate() {
                sum = sum + mop.pair(j, x, k)?;
            }
            if k == unit {
                unit_value = sum;
            } else {
                lhs.push(Poly::monomial(0, sum));
            }
        }
        let zeros = lhs.len();
        lhs.push(Poly::monomial(0, unit_value));
        for (j, x) in xi.iter().enumerate() {
            lhs.push(outside(x, -idx.n[j] + s, idx.m[j] - 1 + s));
        }
        Ok((lhs, expect(zeros, r)))
    };
    out.push(check_identity("orthogonality: Xi", i, "", || type_i(false))?);
    out.push(check_identity("orthogonality: Xi*", i, "", || type_i(true))?);
    Ok(out)
}

/// Type II recurrences in the `n` direction.
pub fn verify_szego_n<S: Scalar>(
    mop: &LaurentMop<S>,
    idx: &IndexPair,
    k: usize,
) -> Result<Vec<VerificationReport>> {
    let p = params_k(k);
    let r = mop.r();
    let i = Some(idx);
    let mut out = Vec::with_capacity(4);

    out.push(check_identity("szego n: Phi* lowering step", i, &p, || {
        let down = inside(idx.n_minus(k), "n - e_k")?;
        let lhs = mop.type_ii_star(idx)?;
        let rhs = mop
            .type_ii_star(&down)?
            .add(&cz(&mop.type_ii(&down)?, &mop.beta(idx)?, 1));
        Ok((vec![lhs], vec![rhs]))
    })?);

    out.push(check_identity("szego n: Phi expansion", i, "", || {
        let mut rhs = mop.type_ii_star(idx)?.scale(&mop.alpha(idx)?);
        for j in 0..r {
            let rho = mop.rho(idx, j)?;
            if !rho.is_zero() {
                rhs = rhs.add(&cz(&phi_or_zero(mop, idx.n_minus(j))?, &rho, 1));
            }
        }
        Ok((vec![mop.type_ii(idx)?], vec![rhs]))
    })?);

    out.push(check_identity("szego n: Xi* raising step", i, &p, || {
        let up = idx.n_plus(k);
        let lhs = mop.type_i_star(idx)?;
        let rhs = vector::sub(
            &mop.type_i_star(&up)?,
            &vector::scale_shift(&mop.type_i(&up)?, &mop.alpha(idx)?, 1),
        );
        Ok((lhs, rhs))
    })?);

    out.push(check_identity("szego n: Xi expansion", i, "", || {
        let mut rhs = vector::scale_shift(&mop.type_i_star(idx)?, &-mop.beta(idx)?, 0);
        for j in 0..r {
            if mop.rho_defined(idx, j) {
                let rho = mop.rho(idx, j)?;
                rhs = vector::add(&rhs, &vector::scale_shift(&mop.type_i(&idx.n_plus(j))?, &rho, 1));
            }
        }
        Ok((mop.type_i(idx)?, rhs))
    })?);
    Ok(out)
}

/// Type II recurrences in the `m` direction.
pub fn verify_szego_m<S: Scalar>(
    mop: &LaurentMop<S>,
    idx: &IndexPair,
    k: usize,
) -> Result<Vec<VerificationReport>> {
    let p = params_k(k);
    let r = mop.r();
    let i = Some(idx);
    let mut out = Vec::with_capacity(4);

    out.push(check_identity("szego m: Phi lowering step", i, &p, || {
        let down = inside(idx.m_minus(k), "m - e_k")?;
        let lhs = mop.type_ii(idx)?;
        let rhs = mop
            .type_ii(&down)?
            .add(&cz(&mop.type_ii_star(&down)?, &mop.alpha(idx)?, -1));
        Ok((vec![lhs], vec![rhs]))
    })?);

    out.push(check_identity("szego m: Phi* expansion", i, "", || {
        let mut rhs = mop.type_ii(idx)?.scale(&mop.beta(idx)?);
        for j in 0..r {
            let sigma = mop.sigma(idx, j)?;
            if !sigma.is_zero() {
                rhs = rhs.add(&cz(&phi_star_or_zero(mop, idx.m_minus(j))?, &sigma, -1));
            }
        }
        Ok((vec![mop.type_ii_star(idx)?], vec![rhs]))
    })?);

    out.push(check_identity("szego m: Xi raising step", i, &p, || {
        let up = idx.m_plus(k);
        let lhs = mop.type_i(idx)?;
        let rhs = vector::sub(
            &mop.type_i(&up)?,
            &vector::scale_shift(&mop.type_i_star(&up)?, &mop.beta(idx)?, -1),
        );
        Ok((lhs, rhs))
    })?);

    out.push(check_identity("szego m: Xi* expansion", i, "", || {
        let mut rhs = vector::scale_shift(&mop.type_i(idx)?, &-mop.alpha(idx)?, 0);
        for j in 0..r {
            if mop.sigma_defined(idx, j) {
                let sigma = mop.sigma(idx, j)?;
                rhs = vector::add(
                    &rhs,
                    &vector::scale_shift(&mop.type_i_star(&idx.m_plus(j))?, &sigma, -1),
                );
            }
        }
        Ok((mop.type_i_star(idx)?, rhs))
    })?);
    Ok(out)
}

/// Pairings of the type I vectors one step past their orthogonality window.
pub fn verify_biorthogonality<S: Scalar>(
    mop: &LaurentMop<S>,
    idx: &IndexPair,
) -> Result<Vec<VerificationReport>> {
    let i = Some(idx);
    let boundary = || -> Result<()> {
        if idx.is_boundary() {
            // Xi = Xi* = 0 there while alpha = beta = 1
            return Err(Error::HypothesisViolated("boundary index carries no type I data".into()));
        }
        Ok(())
    };
    let a = check_identity("biorthogonality: Xi against w^-|m|", i, "", || {
        boundary()?;
        let xi = mop.type_i(idx)?;
        let mut sum = S::zero();
        for (j, x) in xi.iter().enumerate() {
            sum = sum + mop.pair(j, x, idx.abs_m())?;
        }
        Ok((constant(sum), constant(-mop.beta(idx)?)))
    })?;
    let b = check_identity("biorthogonality: Xi* against w^|n|", i, "", || {
        boundary()?;
        let xs = mop.type_i_star(idx)?;
        let mut sum = S::zero();
        for (j, x) in xs.iter().enumerate() {
            sum = sum + mop.pair(j, x, -idx.abs_n())?;
        }
        Ok((constant(sum), constant(-mop.alpha(idx)?)))
    })?;
    Ok(vec![a, b])
}

/// Neighbour differences through `gamma`/`eta` and the scalar compatibility
/// equations between `alpha`, `beta`, `rho`, `sigma`, `gamma`, `eta`.
pub fn verify_compatibility<S: Scalar>(
    mop: &LaurentMop<S>,
    idx: &IndexPair,
    k: usize,
    l: usize,
) -> Result<Vec<VerificationReport>> {
    if k == l {
        return Err(Error::IndexClash(k + 1));
    }
    let p = params_kl(k, l);
    let r = mop.r();
    let i = Some(idx);
    let mut out = Vec::new();

    out.push(check_identity_scaled("neighbours: Phi difference", i, &p, || {
        let (a, b) = (mop.type_ii(&idx.n_plus(k))?, mop.type_ii(&idx.n_plus(l))?);
        let rhs = mop.type_ii(idx)?.scale(&mop.gamma(idx, k, l)?);
        Ok((vec![a.sub(&b)], vec![rhs], a.max_magnitude().max(b.max_magnitude())))
    })?);
    out.push(check_identity_scaled("neighbours: Xi difference", i, &p, || {
        let dk = inside(idx.n_minus(k), "n - e_k")?;
        let dl = inside(idx.n_minus(l), "n - e_l")?;
        let base = inside(dk.n_minus(l), "n - e_k - e_l")?;
        let (a, b) = (mop.type_i(&dk)?, mop.type_i(&dl)?);
        let rhs = vector::scale_shift(&mop.type_i(idx)?, &mop.gamma(&base, k, l)?, 0);
        Ok((vector::sub(&a, &b), rhs, vec_magnitude(&a).max(vec_magnitude(&b))))
    })?);
    out.push(check_identity_scaled("neighbours: Phi* difference", i, &p, || {
        let (a, b) = (mop.type_ii_star(&idx.m_plus(k))?, mop.type_ii_star(&idx.m_plus(l))?);
        let rhs = mop.type_ii_star(idx)?.scale(&mop.eta(idx, k, l)?);
        Ok((vec![a.sub(&b)], vec![rhs], a.max_magnitude().max(b.max_magnitude())))
    })?);
    out.push(check_identity_scaled("neighbours: Xi* difference", i, &p, || {
        let dk = inside(idx.m_minus(k), "m - e_k")?;
        let dl = inside(idx.m_minus(l), "m - e_l")?;
        let base = inside(dk.m_minus(l), "m - e_k - e_l")?;
        let (a, b) = (mop.type_i_star(&dk)?, mop.type_i_star(&dl)?);
        let rhs = vector::scale_shift(&mop.type_i_star(idx)?, &mop.eta(&base, k, l)?, 0);
        Ok((vector::sub(&a, &b), rhs, vec_magnitude(&a).max(vec_magnitude(&b))))
    })?);

    out.push(check_identity_scaled("compatibility: alpha beta + sum rho = 1", i, "", || {
        let mut terms = vec![mop.alpha(idx)? * mop.beta(idx)?];
        for j in 0..r {
            terms.push(mop.rho(idx, j)?);
        }
        let (s, size) = sum_terms(terms);
        Ok((constant(s), constant(S::one()), size))
    })?);
    out.push(check_identity_scaled("compatibility: alpha along n", i, &p, || {
        let (s, size) = sum_terms(vec![mop.alpha(&idx.n_plus(k))?, -mop.alpha(&idx.n_plus(l))?]);
        Ok((constant(s), constant(mop.alpha(idx)? * mop.gamma(idx, k, l)?), size))
    })?);
    out.push(check_identity_scaled("compatibility: beta along n", i, &p, || {
        let (s, size) = sum_terms(vec![mop.beta(&idx.n_plus(l))?, -mop.beta(&idx.n_plus(k))?]);
        let rhs = mop.beta(&idx.n_plus(l).n_plus(k))? * mop.gamma(idx, k, l)?;
        Ok((constant(s), constant(rhs), size))
    })?);
    out.push(check_identity("compatibility: rho gamma shift", i, &p, || {
        let down = inside(idx.n_minus(k), "n - e_k")?;
        let lhs = mop.rho(idx, k)? * mop.gamma(idx, k, l)?;
        let rhs = mop.rho(&idx.n_plus(l), k)? * mop.gamma(&down, k, l)?;
        Ok((constant(lhs), constant(rhs)))
    })?);

    out.push(check_identity_scaled("compatibility: alpha beta + sum sigma = 1", i, "", || {
        let mut terms = vec![mop.alpha(idx)? * mop.beta(idx)?];
        for j in 0..r {
            terms.push(mop.sigma(idx, j)?);
        }
        let (s, size) = sum_terms(terms);
        Ok((constant(s), constant(S::one()), size))
    })?);
    out.push(check_identity_scaled("compatibility: alpha along m", i, &p, || {
        let (s, size) = sum_terms(vec![mop.alpha(&idx.m_plus(l))?, -mop.alpha(&idx.m_plus(k))?]);
        let rhs = mop.alpha(&idx.m_plus(l).m_plus(k))? * mop.eta(idx, k, l)?;
        Ok((constant(s), constant(rhs), size))
    })?);
    out.push(check_identity_scaled("compatibility: beta along m", i, &p, || {
        let (s, size) = sum_terms(vec![mop.beta(&idx.m_plus(k))?, -mop.beta(&idx.m_plus(l))?]);
        Ok((constant(s), constant(mop.beta(idx)? * mop.eta(idx, k, l)?), size))
    })?);
    out.push(check_identity("compatibility: sigma eta shift", i, &p, || {
        let down = inside(idx.m_minus(k), "m - e_k")?;
        let lhs = mop.sigma(idx, k)? * mop.eta(idx, k, l)?;
        let rhs = mop.sigma(&idx.m_plus(l), k)? * mop.eta(&down, k, l)?;
        Ok((constant(lhs), constant(rhs)))
    })?);
    Ok(out)
}

/// `1 - alpha_{n;m+e_k} beta_{n+e_k;m}`.
fn one_minus_ab<S: Scalar>(mop: &LaurentMop<S>, idx: &IndexPair, k: usize) -> Result<S> {
    Ok(S::one() - mop.alpha(&idx.m_plus(k))? * mop.beta(&idx.n_plus(k))?)
}

/// Mixed steps, the `1 - alpha beta` corollary, the nearest-neighbour
/// relations and the gamma-free three-term relation.
pub fn verify_consequences<S: Scalar>(
    mop: &LaurentMop<S>,
    idx: &IndexPair,
    k: usize,
) -> Result<Vec<VerificationReport>> {
    let p = params_k(k);
    let r = mop.r();
    let i = Some(idx);
    let mut out = Vec::new();

    out.push(check_identity("mixed step: Phi* raising n", i, &p, || {
        let rhs = mop
            .type_ii_star(idx)?
            .scale(&one_minus_ab(mop, idx, k)?)
            .add(&cz(&mop.type_ii(&idx.m_plus(k))?, &mop.beta(&idx.n_plus(k))?, 1));
        Ok((vec![mop.type_ii_star(&idx.n_plus(k))?], vec![rhs]))
    })?);
    out.push(check_identity("mixed step: Phi raising m", i, &p, || {
        let rhs = mop
            .type_ii(idx)?
            .scale(&one_minus_ab(mop, idx, k)?)
            .add(&cz(&mop.type_ii_star(&idx.n_plus(k))?, &mop.alpha(&idx.m_plus(k))?, -1));
        Ok((vec![mop.type_ii(&idx.m_plus(k))?], vec![rhs]))
    })?);
    out.push(check_identity("mixed step: Xi* lowering n", i, &p, || {
        let dn = inside(idx.n_minus(k), "n - e_k")?;
        let dm = inside(idx.m_minus(k), "m - e_k")?;
        let a = mop.alpha(&dn)?;
        let factor = S::one() - a.clone() * mop.beta(&dm)?;
        let rhs = vector::sub(
            &vector::scale_shift(&mop.type_i_star(idx)?, &factor, 0),
            &vector::scale_shift(&mop.type_i(&dm)?, &a, 1),
        );
        Ok((mop.type_i_star(&dn)?, rhs))
    })?);
    out.push(check_identity("mixed step: Xi lowering m", i, &p, || {
        let dn = inside(idx.n_minus(k), "n - e_k")?;
        let dm = inside(idx.m_minus(k), "m - e_k")?;
        let b = mop.beta(&dm)?;
        let factor = S::one() - mop.alpha(&dn)? * b.clone();
        let rhs = vector::sub(
            &vector::scale_shift(&mop.type_i(idx)?, &factor, 0),
            &vector::scale_shift(&mop.type_i_star(&dn)?, &b, -1),
        );
        Ok((mop.type_i(&dm)?, rhs))
    })?);

    out.push(check_identity("one minus alpha beta: type II ratio", i, &p, || {
        let nk = idx.n[k];
        let num = mop.pair(k, &mop.type_ii(&idx.m_plus(k))?, nk)?;
        let den = mop.pair(k, &mop.type_ii(idx)?, nk)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("L_k[Phi w^-n_k] at {idx}")));
        }
        Ok((constant(num / den), constant(one_minus_ab(mop, idx, k)?)))
    })?);
    out.push(check_identity("one minus alpha beta: type II* ratio", i, &p, || {
        let mk = idx.m[k];
        let num = mop.pair(k, &mop.type_ii_star(&idx.n_plus(k))?, -mk)?;
        let den = mop.pair(k, &mop.type_ii_star(idx)?, -mk)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero(format!("L_k[Phi* w^m_k] at {idx}")));
        }
        Ok((constant(num / den), constant(one_minus_ab(mop, idx, k)?)))
    })?);
    out.push(check_identity("one minus alpha beta: normality", i, &p, || {
        let nonzero = !one_minus_ab(mop, idx, k)?.is_negligible(1.0);
        let normal = mop.is_normal(&idx.n_plus(k).m_plus(k))?;
        let flag = |b: bool| constant(if b { S::one() } else { S::zero() });
        Ok((flag(nonzero), flag(normal)))
    })?);
    out.push(check_identity("one minus alpha beta: unit modulus", i, &p, || {
        if !mop.system().hermitian() {
            return Err(Error::HypothesisViolated("system is not hermitian".into()));
        }
        if idx.n != idx.m {
            return Err(Error::HypothesisViolated("needs an index of the form (n;n)".into()));
        }
        mop.require_normal(&idx.n_plus(k).m_plus(k))?;
        let a = mop.alpha(&idx.m_plus(k))?;
        let b = mop.beta(&idx.n_plus(k))?;
        let unit = |x: &S| (x.clone() * x.conj()).approx_equal(&S::one(), crate::scalar::FLOAT_TOLERANCE);
        let flag = |b: bool| if b { S::one() } else { S::zero() };
        Ok((vec![Poly::monomial(0, flag(unit(&a))), Poly::monomial(0, flag(unit(&b)))], vec![Poly::zero(), Poly::zero()]))
    })?);

    out.push(check_identity("nearest neighbours: z Phi", i, &p, || {
        let mut rhs = mop
            .type_ii(&idx.n_plus(k))?
            .sub(&mop.type_ii_star(idx)?.scale(&mop.alpha(&idx.n_plus(k))?));
        for j in 0..r {
            if !mop.rho_defined(idx, j) || j == k {
                continue;
            }
            let c = mop.rho(idx, j)? * mop.gamma(idx, j, k)?;
            rhs = rhs.add(&cz(&phi_or_zero(mop, idx.n_minus(j))?, &c, 1));
        }
        Ok((vec![mop.type_ii(idx)?.shift(1)], vec![rhs]))
    })?);
    out.push(check_identity("nearest neighbours: z^-1 Phi*", i, &p, || {
        let mut rhs = mop
            .type_ii_star(&idx.m_plus(k))?
            .sub(&mop.type_ii(idx)?.scale(&mop.beta(&idx.m_plus(k))?));
        for j in 0..r {
            if !mop.sigma_defined(idx, j) || j == k {
                continue;
            }
            let c = mop.sigma(idx, j)? * mop.eta(idx, j, k)?;
            rhs = rhs.add(&cz(&phi_star_or_zero(mop, idx.m_minus(j))?, &c, -1));
        }
        Ok((vec![mop.type_ii_star(idx)?.shift(-1)], vec![rhs]))
    })?);
    out.push(check_identity("nearest neighbours: z Xi", i, &p, || {
        let down = inside(idx.n_minus(k), "n - e_k")?;
        let mut rhs = vector::add(
            &mop.type_i(&down)?,
            &vector::scale_shift(&mop.type_i_star(idx)?, &mop.beta(&down)?, 0),
        );
        for j in 0..r {
            if !mop.rho_defined(idx, j) || j == k {
                continue;
            }
            // the gamma subscript is n - e_k - e_j (n - e_k + e_j does not hold)
            let base = inside(down.n_minus(j), "n - e_k - e_j")?;
            let c = mop.rho(idx, j)? * mop.gamma(&base, j, k)?;
            rhs = vector::add(&rhs, &vector::scale_shift(&mop.type_i(&idx.n_plus(j))?, &c, 1));
        }
        Ok((vector::scale_shift(&mop.type_i(idx)?, &S::one(), 1), rhs))
    })?);
    out.push(check_identity("nearest neighbours: z^-1 Xi*", i, &p, || {
        let down = inside(idx.m_minus(k), "m - e_k")?;
        let mut rhs = vector::add(
            &mop.type_i_star(&down)?,
            &vector::scale_shift(&mop.type_i(idx)?, &mop.alpha(&down)?, 0),
        );
        for j in 0..r {
            if !mop.sigma_defined(idx, j) || j == k {
                continue;
            }
            let base = inside(down.m_minus(j), "m - e_k - e_j")?;
            let c = mop.sigma(idx, j)? * mop.eta(&base, j, k)?;
            rhs = vector::add(&rhs, &vector::scale_shift(&mop.type_i_star(&idx.m_plus(j))?, &c, -1));
        }
        Ok((vector::scale_shift(&mop.type_i_star(idx)?, &S::one(), -1), rhs))
    })?);

    out.push(check_identity("three-term: gamma-free", i, &p, || {
        let a = mop.alpha(idx)?;
        let phi = mop.type_ii(idx)?;
        let mut rhs = mop
            .type_ii(&idx.n_plus(k))?
            .scale(&a)
            .sub(&phi.scale(&mop.alpha(&idx.n_plus(k))?));
        for j in 0..r {
            if !mop.rho_defined(idx, j) {
                continue;
            }
            let c = mop.alpha(&idx.n_plus(j))? * mop.rho(idx, j)?;
            rhs = rhs.add(&cz(&phi_or_zero(mop, idx.n_minus(j))?, &c, 1));
        }
        Ok((vec![cz(&phi, &a, 1)], vec![rhs]))
    })?);
    Ok(out)
}

/// A monotone lattice path `(n_0; m), ..., (n_N; m)` with `n_0 = -m`, each
/// step raising one component of `n` by one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexPath {
    pub m: Vec<i64>,
    /// Direction (zero-based) of each step.
    pub steps: Vec<usize>,
}

impl IndexPath {
    pub fn new(m: Vec<i64>, steps: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = steps.iter().find(|&&s| s >= m.len()) {
            return Err(Error::InvalidInput(format!("path step direction {} exceeds r = {}", bad + 1, m.len())));
        }
        Ok(Self { m, steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The `n` components along the path, `n_0 .. n_N`.
    pub fn ns(&self) -> Vec<Vec<i64>> {
        let mut n: Vec<i64> = self.m.iter().map(|x| -x).collect();
        let mut out = vec![n.clone()];
        for &s in &self.steps {
            n[s] += 1;
            out.push(n.clone());
        }
        out
    }

    pub fn target(&self) -> Vec<i64> {
        self.ns().pop().expect("a path has at least its start")
    }

    pub fn describe(&self) -> String {
        let fmt = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        self.ns().iter().map(|n| format!("({})", fmt(n))).collect::<Vec<_>>().join("->")
    }
}

/// Every monotone path from `-m` to `target`, in lexicographic order of the
/// step sequence.
pub fn enumerate_paths(m: &[i64], target: &[i64]) -> Result<Vec<IndexPath>> {
    if m.len() != target.len() {
        return Err(Error::InvalidInput("m and target have different lengths".into()));
    }
    let mut remaining = Vec::with_capacity(m.len());
    for (t, mj) in target.iter().zip(m) {
        if t + mj < 0 {
            return Err(Error::InvalidInput(format!("target {t} lies below the path start {}", -mj)));
        }
        remaining.push((t + mj) as usize);
    }
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn walk(remaining: &mut [usize], steps: &mut Vec<usize>, m: &[i64], out: &mut Vec<IndexPath>) {
        if remaining.iter().all(|&x| x == 0) {
            out.push(IndexPath { m: m.to_vec(), steps: steps.clone() });
            return;
        }
        for j in 0..remaining.len() {
            if remaining[j] > 0 {
                remaining[j] -= 1;
                steps.push(j);
                walk(remaining, steps, m, out);
                steps.pop();
                remaining[j] += 1;
            }
        }
    }
    walk(&mut remaining, &mut steps, m, &mut out);
    Ok(out)
}

/// `count` nonzero rationals `p/q` with `|p|, |q| <= 7`, drawn from a seeded
/// ChaCha stream, as pairs `(z, xi)` with `z != xi`.
pub fn random_point_pairs<S: Scalar>(seed: u64, count: usize) -> Vec<(S, S)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let p: i64 = rng.gen_range(-7..=7);
        let q: i64 = rng.gen_range(1..=7);
        if p != 0 {
            return GaussianRational::from_ratio(p, q);
        }
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = draw(&mut rng);
        let xi = draw(&mut rng);
        if z != xi {
            out.push((S::from_exact(&z), S::from_exact(&xi)));
        }
    }
    out
}

fn eval_vec<S: Scalar>(v: &TypeIVector<S>, x: &S) -> Result<Vec<S>> {
    v.iter().map(|p| p.eval(x)).collect()
}

fn constants<S: Scalar>(v: Vec<S>) -> Vec<Poly<S>> {
    v.into_iter().map(|c| Poly::monomial(0, c)).collect()
}

/// Both Christoffel-Darboux sums along `path`, evaluated at `(z, xi)`. The
/// first form uses the indices `(n_k; m)`, the second `(m; n_k)`. Both are
/// identities of r-vectors, compared componentwise.
pub fn christoffel_darboux<S: Scalar>(
    mop: &LaurentMop<S>,
    path: &IndexPath,
    z: &S,
    xi: &S,
) -> Result<Vec<VerificationReport>> {
    if z.is_zero() || xi.is_zero() {
        return Err(Error::SingularEvaluation);
    }
    let r = mop.r();
    let m = path.m.clone();
    let ns = path.ns();
    let params = format!("path {} at z={z}, xi={xi}", path.describe());
    let first_idx = IndexPair::new(path.target(), m.clone())?;
    let second_idx = IndexPair::new(m.clone(), path.target())?;

    let first = check_identity("christoffel-darboux: type II with type I", Some(&first_idx), &params, || {
        let at = |n: &Vec<i64>| IndexPair::new(n.clone(), m.clone());
        let mut lhs = vec![S::zero(); r];
        for w in ns.windows(2) {
            let phi = mop.type_ii(&at(&w[0])?)?.eval(z)?;
            let xi_next = eval_vec(&mop.type_i(&at(&w[1])?)?, xi)?;
            for (acc, x) in lhs.iter_mut().zip(xi_next) {
                *acc = acc.clone() + phi.clone() * x;
            }
        }
        let diff = xi.clone() - z.clone();
        let lhs: Vec<S> = lhs.into_iter().map(|v| diff.clone() * v).collect();

        let end = &first_idx;
        let ps = mop.type_ii_star(end)?.eval(z)?;
        let mut rhs: Vec<S> = eval_vec(&mop.type_i_star(end)?, xi)?
            .into_iter()
            .map(|x| ps.clone() * x)
            .collect();
        let zxi = z.clone() * xi.clone();
        for j in 0..r {
            if !mop.rho_defined(end, j) {
                continue;
            }
            let rho = mop.rho(end, j)?;
            let phi = phi_or_zero(mop, end.n_minus(j))?.eval(z)?;
            let xs = eval_vec(&mop.type_i(&end.n_plus(j))?, xi)?;
            for (acc, x) in rhs.iter_mut().zip(xs) {
                *acc = acc.clone() - zxi.clone() * rho.clone() * phi.clone() * x;
            }
        }
        Ok((constants(lhs), constants(rhs)))
    })?;

    let second = check_identity("christoffel-darboux: type II* with type I*", Some(&second_idx), &params, || {
        let at = |n: &Vec<i64>| IndexPair::new(m.clone(), n.clone());
        let mut lhs = vec![S::zero(); r];
        for w in ns.windows(2) {
            let ps = mop.type_ii_star(&at(&w[0])?)?.eval(z)?;
            let xs_next = eval_vec(&mop.type_i_star(&at(&w[1])?)?, xi)?;
            for (acc, x) in lhs.iter_mut().zip(xs_next) {
                *acc = acc.clone() + ps.clone() * x;
            }
        }
        let diff = z.clone() - xi.clone();
        let lhs: Vec<S> = lhs.into_iter().map(|v| diff.clone() * v).collect();

        let end = &second_idx;
        let zxi = z.clone() * xi.clone();
        let phi = mop.type_ii(end)?.eval(z)?;
        let mut rhs: Vec<S> = eval_vec(&mop.type_i(end)?, xi)?
            .into_iter()
            .map(|x| zxi.clone() * phi.clone() * x)
            .collect();
        for j in 0..r {
            if !mop.sigma_defined(end, j) {
                continue;
            }
            let sigma = mop.sigma(end, j)?;
            let ps = phi_star_or_zero(mop, end.m_minus(j))?.eval(z)?;
            let xs = eval_vec(&mop.type_i_star(&end.m_plus(j))?, xi)?;
            for (acc, x) in rhs.iter_mut().zip(xs) {
                *acc = acc.clone() - sigma.clone() * ps.clone() * x;
            }
        }
        Ok((constants(lhs), constants(rhs)))
    })?;
    Ok(vec![first, second])
}

/// Reversal symmetry: the families of the reversed system at `(n;m)` against
/// the starred families of the original at `(m;n)`.
pub fn verify_reversal<S: Scalar>(
    mop: &LaurentMop<S>,
    reversed: &LaurentMop<S>,
    idx: &IndexPair,
) -> Result<Vec<VerificationReport>> {
    let sw = idx.swapped();
    let i = Some(idx);
    let mut out = Vec::new();
    out.push(check_identity("reversal: Phi against Phi*", i, "", || -> Result<Sides<S>> {
        Ok((vec![reversed.type_ii(idx)?], vec![mop.type_ii_star(&sw)?.sharp()]))
    })?);
    out.push(check_identity("reversal: Phi* against Phi", i, "", || -> Result<Sides<S>> {
        Ok((vec![reversed.type_ii_star(idx)?], vec![mop.type_ii(&sw)?.sharp()]))
    })?);
    out.push(check_identity("reversal: Xi against Xi*", i, "", || -> Result<Sides<S>> {
        Ok((reversed.type_i(idx)?, vector::sharp(&mop.type_i_star(&sw)?)))
    })?);
    out.push(check_identity("reversal: Xi* against Xi", i, "", || -> Result<Sides<S>> {
        Ok((reversed.type_i_star(idx)?, vector::sharp(&mop.type_i(&sw)?)))
    })?);
    out.push(check_identity("reversal: alpha against conj beta", i, "", || -> Result<Sides<S>> {
        Ok((constant(reversed.alpha(idx)?), constant(mop.beta(&sw)?.conj())))
    })?);
    Ok(out)
}

/// All index-local checks at one index: the defining orthogonality conditions,
/// both Szego directions for every `k`,
/// biorthogonality, compatibility for every ordered `k != l`, and the
/// consequences for every `k`.
pub fn verify_all_at<S: Scalar>(mop: &LaurentMop<S>, idx: &IndexPair) -> Result<Vec<VerificationReport>> {
    let r = mop.r();
    let mut out = verify_orthogonality(mop, idx)?;
    for k in 0..r {
        out.extend(verify_szego_n(mop, idx, k)?);
        out.extend(verify_szego_m(mop, idx, k)?);
    }
    out.extend(verify_biorthogonality(mop, idx)?);
    for k in 0..r {
        for l in 0..r {
            if k != l {
                out.extend(verify_compatibility(mop, idx, k, l)?);
            }
        }
    }
    for k in 0..r {
        out.extend(verify_consequences(mop, idx, k)?);
    }
    // the expansions do not depend on k; keep one copy each
    let mut seen = std::collections::HashSet::new();
    out.retain(|rep| !rep.params.is_empty() || seen.insert(rep.identity.clone()));
    Ok(out)
}
