//! Moment functionals on Laurent polynomials (`c_k = L[w^{-k}]`) and on
//! ordinary polynomials (`m_k = M[x^k]`), with the transforms used by the
//! rest of the crate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};


use crate::error::{Error, Result};
use crate::polynomial::{LaurentPoly, RealPoly};
use crate::scalar::{float_literal, GaussianRational, Rational, Scalar};

/// Location of a point mass on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub enum CirclePoint {
    /// `w = ((1 - t^2) + 2it) / (1 + t^2)`.
    Rational(Rational),
    MinusOne,
    /// `w = e^{i theta}`; float field only.
    Angle(f64),
}

impl CirclePoint {
    pub fn from_ratio(p: i64, q: i64) -> Self {
        CirclePoint::Rational(GaussianRational::from_ratio(p, q).re)
    }

    pub fn to_scalar<S: Scalar>(&self) -> Result<S> {
        match self {
            CirclePoint::Rational(t) => {
                let t2 = t * t;
                let den = Rational::ONE + &t2;
                let re = (Rational::ONE - &t2) / &den;
                let im = (t + t) / den;
                Ok(S::from_exact(&GaussianRational::new(re, im)))
            }
            CirclePoint::MinusOne => Ok(-S::one()),
            CirclePoint::Angle(theta) => {
                if S::EXACT {
                    return Err(Error::InvalidInput(
                        "angle-parametrized atoms are only allowed in the float field".into(),
                    ));
                }
                Ok(float_literal(theta.cos(), theta.sin()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CircleAtom<S> {
    pub point: CirclePoint,
    pub weight: S,
}

impl<S: Scalar> CircleAtom<S> {
    pub fn new(point: CirclePoint, weight: S) -> Self {
        Self { point, weight }
    }
}

/// Fallback for moments missing from an explicit table.
#[derive(Clone, Debug, PartialEq)]
pub enum TableDefault<S> {
    Zero,
    /// `c_k = a^{|k|}`.
    Geometric(S),
    Error,
}

enum Source<S> {
    Atoms(Vec<(S, S)>),
    Table { table: BTreeMap<i64, S>, default: TableDefault<S> },
    Sharp(LaurentFunctional<S>),
    Shift(LaurentFunctional<S>, i64),
    SzegoMap(RealFunctional<S>),
}

struct Inner<S> {
    source: Source<S>,
    hermitian: bool,
    symmetric: bool,
    description: String,
    cache: Mutex<HashMap<i64, S>>,
}

/// A linear functional on Laurent polynomials, given by its moments
/// `c_k = L[w^{-k}]`. Cheap to clone; clones share the moment cache.
#[derive(Clone)]
pub struct LaurentFunctional<S> {
    inner: Arc<Inner<S>>,
}

impl<S> fmt::Debug for LaurentFunctional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentFunctional({})", self.inner.description)
    }
}

impl<S: Scalar> LaurentFunctional<S> {
    fn build(source: Source<S>, hermitian: bool, symmetric: bool, description: String) -> Self {
        Self {
            inner: Arc::new(Inner { source, hermitian, symmetric, description, cache: Mutex::default() }),
        }
    }

    pub fn from_atoms(atoms: &[CircleAtom<S>]) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("atom list is empty".into()));
        }
        let mut resolved: Vec<(S, S)> = Vec::with_capacity(atoms.len());
        for a in atoms {
            resolved.push((a.point.to_scalar::<S>()?, a.weight.clone()));
        }
        let hermitian = atoms.iter().all(|a| {
            let c = a.weight.to_c64();
            c.im == 0.0 && c.re >= 0.0
        });
        let symmetric = reflection_invariant(&resolved);
        Ok(Self::build(
            Source::Atoms(resolved),
            hermitian,
            symmetric,
            format!("{} circle atoms", atoms.len()),
        ))
    }

    /// Normalized Lebesgue measure, `c_k = delta_{k0}`.
    pub fn lebesgue() -> Self {
        let table = BTreeMap::from([(0, S::one())]);
        Self::build(Source::Table { table, default: TableDefault::Zero }, true, true, "lebesgue".into())
    }

    /// `c_k = a^{|k|}`.
    pub fn geometric(a: S) -> Self {
        Self::from_moment_table(BTreeMap::new(), TableDefault::Geometric(a))
    }

    pub fn from_moment_table(table: BTreeMap<i64, S>, default: TableDefault<S>) -> Self {
        let lookup = |k: i64| -> Option<S> {
            table.get(&k).cloned().or_else(|| match &default {
                TableDefault::Zero => Some(S::zero()),
                TableDefault::Geometric(a) => Some(a.pow_i(k.abs())),
                TableDefault::Error => None,
            })
        };
        // decidable flags: every explicit entry against its mirror, plus the rule itself
        let mut hermitian = match &default {
            TableDefault::Geometric(a) => *a == a.conj(),
            _ => true,
        };
        let mut symmetric = true;
        for &k in table.keys() {
            match (lookup(k), lookup(-k)) {
                (Some(a), Some(b)) => {
                    hermitian &= b == a.conj();
                    symmetric &= a == b;
                }
                _ => {
                    hermitian = false;
                    symmetric = false;
                }
            }
        }
        let description = match &default {
            TableDefault::Zero => format!("moment table ({} entries, zero-extended)", table.len()),
            TableDefault::Geometric(a) => format!("moment table, geometric({a}) default"),
            TableDefault::Error => format!("moment table ({} entries)", table.len()),
        };
        Self::build(Source::Table { table, default }, hermitian, symmetric, description)
    }

    pub fn hermitian(&self) -> bool {
        self.inner.hermitian
    }

    pub fn symmetric(&self) -> bool {
        self.inner.symmetric
    }

    pub fn description(&self) -> &str {
        &self.inner.description
    }

    /// `c_k = L[w^{-k}]`.
    pub fn moment(&self, k: i64) -> Result<S> {
        if let Some(v) = self.inner.cache.lock().expect("moment cache poisoned").get(&k) {
            return Ok(v.clone());
        }
        let v = self.compute(k)?;
        self.inner.cache.lock().expect("moment cache poisoned").entry(k).or_insert_with(|| v.clone());
        Ok(v)
    }

    fn compute(&self, k: i64) -> Result<S> {
        match &self.inner.source {
            Source::Atoms(atoms) => Ok(atoms
                .iter()
                .fold(S::zero(), |acc, (w, wt)| acc + wt.clone() * w.pow_i(-k))),
            Source::Table { table, default } => match table.get(&k) {
                Some(v) => Ok(v.clone()),
                None => match default {
                    TableDefault::Zero => Ok(S::zero()),
                    TableDefault::Geometric(a) => Ok(a.pow_i(k.abs())),
                    TableDefault::Error => Err(Error::MomentUnavailable { functional: 0, k }),
                },
            },
            Source::Sharp(l) => Ok(l.moment(-k)?.conj()),
            Source::Shift(l, s) => l.moment(k - s),
            Source::SzegoMap(m) => {
                let cs = szego_forward(m, k.unsigned_abs() as usize)?;
                Ok(cs[k.unsigned_abs() as usize].clone())
            }
        }
    }

    /// `L^sharp`, with `L^sharp[w^{-k}] = conj(L[w^k])`.
    pub fn sharp(&self) -> Self {
        if let Source::Sharp(inner) = &self.inner.source {
            return inner.clone();
        }
        Self::build(
            Source::Sharp(self.clone()),
            self.inner.hermitian,
            self.inner.symmetric,
            format!("sharp of {}", self.inner.description),
        )
    }

    /// `w^s L`, i.e. moments `c_{k-s}`.
    pub fn shift(&self, s: i64) -> Self {
        if s == 0 {
            return self.clone();
        }
        let (base, total) = match &self.inner.source {
            Source::Shift(l, t) => (l.clone(), s + t),
            _ => (self.clone(), s),
        };
        if total == 0 {
            return base;
        }
        let description = format!("w^{total} times {}", base.inner.description);
        Self::build(Source::Shift(base, total), false, false, description)
    }

    /// `L[f(w) w^{-k}] = sum_e f_e c_{k-e}`.
    pub fn apply_shifted(&self, f: &LaurentPoly<S>, k: i64) -> Result<S> {
        let mut acc = S::zero();
        for (e, c) in f.terms() {
            acc = acc + c.clone() * self.moment(k - e)?;
        }
        Ok(acc)
    }

    /// `L[f(w)]`.
    pub fn apply(&self, f: &LaurentPoly<S>) -> Result<S> {
        self.apply_shifted(f, 0)
    }

    pub fn caratheodory_series(&self, depth: usize) -> Result<FormalSeriesPair<S>> {
        let two = S::from_i64(2);
        let c0 = self.moment(0)?;
        let mut at_zero = vec![c0.clone()];
        let mut at_infinity = vec![-c0];
        for k in 1..=depth as i64 {
            at_zero.push(two.clone() * self.moment(k)?);
            at_infinity.push(-(two.clone() * self.moment(-k)?));
        }
        Ok(FormalSeriesPair { at_zero, at_infinity, depth })
    }
}

fn reflection_invariant<S: Scalar>(atoms: &[(S, S)]) -> bool {
    let tol = crate::scalar::FLOAT_TOLERANCE;
    // merge coincident points first so split weights compare correctly
    let mut merged: Vec<(S, S)> = Vec::new();
    for (w, wt) in atoms {
        match merged.iter_mut().find(|(p, _)| p.approx_equal(w, tol)) {
            Some(slot) => slot.1 = slot.1.clone() + wt.clone(),
            None => merged.push((w.clone(), wt.clone())),
        }
    }
    merged.iter().all(|(w, wt)| {
        let mirror = w.conj();
        merged.iter().any(|(p, pw)| p.approx_equal(&mirror, tol) && pw.approx_equal(wt, tol))
    })
}

/// Truncated expansions of `F(z) = L[(w+z)/(w-z)]` at 0 and at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSeriesPair<S> {
    /// Coefficients of `z^0 .. z^D`.
    pub at_zero: Vec<S>,
    /// Coefficients of `z^0, z^{-1} .. z^{-D}`.
    pub at_infinity: Vec<S>,
    pub depth: usize,
}

/// A system `(L_1, ..., L_r)` of Laurent moment functionals.
#[derive(Clone, Debug)]
pub struct FunctionalSystem<S> {
    functionals: Vec<LaurentFunctional<S>>,
}

impl<S: Scalar> FunctionalSystem<S> {
    pub fn new(functionals: Vec<LaurentFunctional<S>>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::InvalidInput("a system needs at least one functional".into()));
        }
        Ok(Self { functionals })
    }

    pub fn r(&self) -> usize {
        self.functionals.len()
    }

    pub fn functional(&self, j: usize) -> &LaurentFunctional<S> {
        &self.functionals[j]
    }

    pub fn functionals(&self) -> &[LaurentFunctional<S>] {
        &self.functionals
    }

    /// `c_{k,j}`, with the functional index recorded in errors.
    pub fn moment(&self, j: usize, k: i64) -> Result<S> {
        self.functionals[j].moment(k).map_err(|e| relabel(e, j))
    }

    /// `L_j[f(w) w^{-k}]`.
    pub fn apply_shifted(&self, j: usize, f: &LaurentPoly<S>, k: i64) -> Result<S> {
        self.functionals[j].apply_shifted(f, k).map_err(|e| relabel(e, j))
    }

    pub fn sharp(&self) -> Self {
        Self { functionals: self.functionals.iter().map(|l| l.sharp()).collect() }
    }

    pub fn shift(&self, s: i64) -> Self {
        Self { functionals: self.functionals.iter().map(|l| l.shift(s)).collect() }
    }

    pub fn hermitian(&self) -> bool {
        self.functionals.iter().all(|l| l.hermitian())
    }

    pub fn symmetric(&self) -> bool {
        self.functionals.iter().all(|l| l.symmetric())
    }
}

fn relabel(e: Error, j: usize) -> Error {
    match e {
        Error::MomentUnavailable { k, .. } => Error::MomentUnavailable { functional: j, k },
        other => other,
    }
}

/// Fallback for real moments missing from an explicit table.
#[derive(Clone, Debug, PartialEq)]
pub enum RealTableDefault {
    Zero,
    Error,
}

enum RealSource<S> {
    Atoms(Vec<(S, S)>),
    Table { table: Vec<S>, default: RealTableDefault },
    SzegoInverse(LaurentFunctional<S>),
}

struct RealInner<S> {
    source: RealSource<S>,
    description: String,
    cache: Mutex<HashMap<usize, S>>,
}

/// A linear functional on polynomials, given by `m_k = M[x^k]`.
#[derive(Clone)]
pub struct RealFunctional<S> {
    inner: Arc<RealInner<S>>,
}

impl<S> fmt::Debug for RealFunctional<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealFunctional({})", self.inner.description)
    }
}

impl<S: Scalar> RealFunctional<S> {
    fn build(source: RealSource<S>, description: String) -> Self {
        Self { inner: Arc::new(RealInner { source, description, cache: Mutex::default() }) }
    }

    /// Point masses `sum weight * delta_x`.
    pub fn from_atoms(atoms: Vec<(S, S)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidInput("atom list is empty".into()));
        }
        let description = format!("{} real atoms", atoms.len());
        Ok(Self::build(RealSource::Atoms(atoms), description))
    }

    /// `m_k = table[k]` for `k` in range, then the default rule.
    pub fn from_moments(table: Vec<S>, default: RealTableDefault) -> Self {
        let description = format!("real moment table ({} entries)", table.len());
        Self::build(RealSource::Table { table, default }, description)
    }

    pub fn description(&self) -> &str {
        &self.inner.description
    }

    pub fn moment(&self, k: usize) -> Result<S> {
        if let Some(v) = self.inner.cache.lock().expect("moment cache poisoned").get(&k) {
            return Ok(v.clone());
        }
        let v = match &self.inner.source {
            RealSource::Atoms(atoms) => atoms
                .iter()
                .fold(S::zero(), |acc, (x, w)| acc + w.clone() * x.pow_i(k as i64)),
            RealSource::Table { table, default } => match (table.get(k), default) {
                (Some(v), _) => v.clone(),
                (None, RealTableDefault::Zero) => S::zero(),
                (None, RealTableDefault::Error) => {
                    return Err(Error::MomentUnavailable { functional: 0, k: k as i64 })
                }
            },
            RealSource::SzegoInverse(l) => {
                // m_k = sum_j C(k, j) c_{|k - 2j|}
                let row = pascal_row::<S>(k);
                let mut acc = S::zero();
                for (j, b) in row.iter().enumerate() {
                    let e = (k as i64 - 2 * j as i64).abs();
                    let (plus, minus) = (l.moment(e)?, l.moment(-e)?);
                    if plus != minus {
                        return Err(Error::NotSymmetric { k: e });
                    }
                    acc = acc + b.clone() * plus;
                }
                acc
            }
        };
        self.inner.cache.lock().expect("moment cache poisoned").entry(k).or_insert_with(|| v.clone());
        Ok(v)
    }

    /// `M[p(x) x^k]`.
    pub fn apply_shifted(&self, p: &RealPoly<S>, k: usize) -> Result<S> {
        let mut acc = S::zero();
        for (d, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc + c.clone() * self.moment(d + k)?;
            }
        }
        Ok(acc)
    }
}

/// A system `(M_1, ..., M_r)` of real-line moment functionals.
#[derive(Clone, Debug)]
pub struct RealSystem<S> {
    functionals: Vec<RealFunctional<S>>,
}

impl<S: Scalar> RealSystem<S> {
    pub fn new(functionals: Vec<RealFunctional<S>>) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::InvalidInput("a system needs at least one functional".into()));
        }
        Ok(Self { functionals })
    }

    pub fn r(&self) -> usize {
        self.functionals.len()
    }

    pub fn functional(&self, j: usize) -> &RealFunctional<S> {
        &self.functionals[j]
    }

    pub fn apply_shifted(&self, j: usize, p: &RealPoly<S>, k: usize) -> Result<S> {
        self.functionals[j].apply_shifted(p, k).map_err(|e| relabel(e, j))
    }

    /// Componentwise `Sz^{-1}` of a symmetric circle system.
    pub fn from_circle(system: &FunctionalSystem<S>) -> Result<Self> {
        let fs = system.functionals().iter().map(szego_inverse).collect::<Result<Vec<_>>>()?;
        Self::new(fs)
    }
}

/// `C(k, 0..=k)` computed in the field itself, so no integer type can overflow.
pub fn pascal_row<S: Scalar>(k: usize) -> Vec<S> {
    let mut row = vec![S::one()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(S::one());
        for w in row.windows(2) {
            next.push(w[0].clone() + w[1].clone());
        }
        next.push(S::one());
        row = next;
    }
    row
}

/// `c_0 .. c_upto` of `Sz(M)`:
/// `c_0 = m_0`, `c_k = (m_k - sum_{j=1}^{k-1} C(k,j) c_{|k-2j|}) / 2`.
fn szego_forward<S: Scalar>(m: &RealFunctional<S>, upto: usize) -> Result<Vec<S>> {
    let two = S::from_i64(2);
    let mut c: Vec<S> = Vec::with_capacity(upto + 1);
    for k in 0..=upto {
        if k == 0 {
            c.push(m.moment(0)?);
            continue;
        }
        let row = pascal_row::<S>(k);
        let mut acc = m.moment(k)?;
        for (j, b) in row.iter().enumerate().take(k).skip(1) {
            acc = acc - b.clone() * c[(k as i64 - 2 * j as i64).unsigned_abs() as usize].clone();
        }
        c.push(acc / two.clone());
    }
    Ok(c)
}

/// `Sz(M)`: the symmetric functional with `L[(w + 1/w)^k] = M[x^k]`.
pub fn szego_map<S: Scalar>(m: &RealFunctional<S>) -> LaurentFunctional<S> {
    let description = format!("szego image of {}", m.description());
    LaurentFunctional::build(Source::SzegoMap(m.clone()), false, true, description)
}

/// `Sz^{-1}(L)`, with `m_k = sum_j C(k, j) c_{|k - 2j|}`.
pub fn szego_inverse<S: Scalar>(l: &LaurentFunctional<S>) -> Result<RealFunctional<S>> {
    if !l.symmetric() {
        return Err(Error::NotSymmetric { k: 0 });
    }
    let description = format!("szego preimage of {}", l.description());
    Ok(RealFunctional::build(RealSource::SzegoInverse(l.clone()), description))
}

/// Convenience: a real atom at `x = p/q`.
pub fn real_point<S: Scalar>(p: i64, q: i64) -> S {
    S::from_exact(&GaussianRational::from_ratio(p, q))
}

impl<S: Scalar> FormalSeriesPair<S> {
    pub fn is_empty(&self) -> bool {
        self.at_zero.is_empty() && self.at_infinity.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(p: i64, d: i64) -> Q {
        Q::from_ratio(p, d)
    }

    #[test]
    fn atoms_evaluate_moments() {
        let one_and_i = LaurentFunctional::from_atoms(&[
            CircleAtom::new(CirclePoint::from_ratio(0, 1), q(1, 2)),
            CircleAtom::new(CirclePoint::from_ratio(1, 1), q(1, 2)),
        ])
        .unwrap();
        // 1/2 (1 + i^{-1}) and 1/2 (1 + i)
        assert_eq!(one_and_i.moment(1).unwrap(), Q::from_parts((1, 2), (-1, 2)));
        assert_eq!(one_and_i.moment(-1).unwrap(), Q::from_parts((1, 2), (1, 2)));
        assert!(one_and_i.hermitian());
        assert!(!one_and_i.symmetric());

        let parity = LaurentFunctional::from_atoms(&[
            CircleAtom::new(CirclePoint::from_ratio(0, 1), q(1, 2)),
            CircleAtom::new(CirclePoint::MinusOne, q(1, 2)),
        ])
        .unwrap();
        for k in -4..=4 {
            let want = if k % 2 == 0 { q(1, 1) } else { q(0, 1) };
            assert_eq!(parity.moment(k).unwrap(), want);
        }
        assert!(parity.symmetric() && parity.hermitian());
        assert!(LaurentFunctional::<Q>::from_atoms(&[]).is_err());
    }

    #[test]
    fn table_defaults() {
        let g = LaurentFunctional::geometric(q(1, 2));
        assert_eq!(g.moment(3).unwrap(), q(1, 8));
        assert_eq!(g.moment(-3).unwrap(), q(1, 8));
        assert!(g.symmetric() && g.hermitian());
        let t = LaurentFunctional::from_moment_table(
            BTreeMap::from([(0, q(1, 1)), (1, Q::i())]),
            TableDefault::Error,
        );
        assert_eq!(t.moment(5), Err(Error::MomentUnavailable { functional: 0, k: 5 }));
        assert!(!t.hermitian());
    }

    #[test]
    fn sharp_and_shift() {
        let t = LaurentFunctional::from_moment_table(
            BTreeMap::from([(0, q(1, 1)), (1, Q::i())]),
            TableDefault::Zero,
        );
        let s = t.sharp();
        assert_eq!(s.moment(1).unwrap(), q(0, 1));
        assert_eq!(s.moment(-1).unwrap(), -Q::i());
        let l = LaurentFunctional::<Q>::lebesgue();
        assert_eq!(l.shift(1).moment(1).unwrap(), q(1, 1));
        assert_eq!(l.shift(1).moment(0).unwrap(), q(0, 1));
        let g = LaurentFunctional::geometric(q(1, 2));
        assert_eq!(g.shift(1).moment(0).unwrap(), q(1, 2));
        assert_eq!(g.shift(1).shift(-1).moment(4).unwrap(), q(1, 16));
    }

    #[test]
    fn caratheodory_examples() {
        let g = LaurentFunctional::geometric(q(1, 2));
        let s = g.caratheodory_series(2).unwrap();
        assert_eq!(s.at_zero, vec![q(1, 1), q(1, 1), q(1, 2)]);
        assert_eq!(s.at_infinity, vec![q(-1, 1), q(-1, 1), q(-1, 2)]);
        let l = LaurentFunctional::<Q>::lebesgue().caratheodory_series(3).unwrap();
        assert_eq!(l.at_zero, vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
    }

    #[test]
    fn szego_map_examples() {
        let arcsine = RealFunctional::from_moments(
            vec![q(1, 1), q(0, 1), q(2, 1), q(0, 1), q(6, 1)],
            RealTableDefault::Error,
        );
        let l = szego_map(&arcsine);
        for k in -4..=4 {
            assert_eq!(l.moment(k).unwrap(), if k == 0 { q(1, 1) } else { q(0, 1) });
        }
        let delta2 = RealFunctional::from_atoms(vec![(q(2, 1), q(1, 1))]).unwrap();
        assert_eq!(szego_map(&delta2).moment(7).unwrap(), q(1, 1));
        let bs = RealFunctional::from_moments(
            vec![q(1, 1), q(1, 1), q(5, 2), q(13, 4)],
            RealTableDefault::Error,
        );
        let c: Vec<Q> = (0..4).map(|k| szego_map(&bs).moment(k).unwrap()).collect();
        assert_eq!(c, vec![q(1, 1), q(1, 2), q(1, 4), q(1, 8)]);

        let m = szego_inverse(&LaurentFunctional::geometric(q(1, 2))).unwrap();
        assert_eq!(m.moment(1).unwrap(), q(1, 1));
        assert_eq!(m.moment(2).unwrap(), q(5, 2));
        let skew = LaurentFunctional::from_moment_table(
            BTreeMap::from([(0, q(1, 1)), (1, Q::i())]),
            TableDefault::Zero,
        );
        assert!(matches!(szego_inverse(&skew), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn float_angles_rejected_in_exact_field() {
        assert!(CirclePoint::Angle(0.3).to_scalar::<Q>().is_err());
        let w: crate::scalar::ComplexFloat = CirclePoint::Angle(0.0).to_scalar().unwrap();
        assert!(w.approx_equal(&crate::scalar::ComplexFloat::one(), 1e-15));
    }
}
