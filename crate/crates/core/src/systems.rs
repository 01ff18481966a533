//! Small named systems used by the test suites, benches and the CLI.

use crate::error::Result;
use crate::moments::{CircleAtom, CirclePoint, FunctionalSystem, LaurentFunctional};
use crate::scalar::{GaussianRational, Scalar};

fn w<S: Scalar>(p: i64, q: i64) -> S {
    S::from_exact(&GaussianRational::from_ratio(p, q))
}

/// Atom at the rational parameter `t = p/q`, weight `a/b`.
fn atom<S: Scalar>(t: (i64, i64), weight: (i64, i64)) -> CircleAtom<S> {
    CircleAtom::new(CirclePoint::from_ratio(t.0, t.1), w(weight.0, weight.1))
}

fn minus_one<S: Scalar>(weight: (i64, i64)) -> CircleAtom<S> {
    CircleAtom::new(CirclePoint::MinusOne, w(weight.0, weight.1))
}

pub fn lebesgue<S: Scalar>() -> FunctionalSystem<S> {
    FunctionalSystem::new(vec![LaurentFunctional::lebesgue()]).expect("r = 1")
}

/// `c_k = a^{|k|}` (a Bernstein-Szego weight for `|a| < 1`).
pub fn geometric<S: Scalar>(p: i64, q: i64) -> FunctionalSystem<S> {
    FunctionalSystem::new(vec![LaurentFunctional::geometric(w(p, q))]).expect("r = 1")
}

/// `{(d_1 + d_i)/2, (d_-1 + d_-i)/2}`.
pub fn s2<S: Scalar>() -> Result<FunctionalSystem<S>> {
    FunctionalSystem::new(vec![
        LaurentFunctional::from_atoms(&[atom((0, 1), (1, 2)), atom((1, 1), (1, 2))])?,
        LaurentFunctional::from_atoms(&[minus_one((1, 2)), atom((-1, 1), (1, 2))])?,
    ])
}

/// Three positive atomic measures with six atoms each and disjoint supports.
/// Every atom sits at a point with denominator dividing 25, which keeps the
/// exact moments small.
pub fn three_atomic<S: Scalar>() -> Result<FunctionalSystem<S>> {
    let weights = [(1, 12), (2, 12), (3, 12), (1, 12), (2, 12), (3, 12)];
    let make = |ts: &[(i64, i64)]| -> Vec<CircleAtom<S>> {
        ts.iter().zip(weights).map(|(&t, wt)| atom(t, wt)).collect()
    };
    let first = make(&[(0, 1), (1, 2), (-1, 3), (3, 4), (-7, 1), (2, 1)]);
    let second = make(&[(1, 1), (-1, 2), (1, 3), (-3, 4), (1, 7), (-3, 1)]);
    let mut third = make(&[(-1, 1), (3, 1), (-2, 1), (4, 3), (-1, 7)]);
    third.push(minus_one(weights[5]));
    FunctionalSystem::new(vec![
        LaurentFunctional::from_atoms(&first)?,
        LaurentFunctional::from_atoms(&second)?,
        LaurentFunctional::from_atoms(&third)?,
    ])
}

/// Two positive atomic measures, each invariant under `w -> 1/w`.
pub fn symmetric_pair<S: Scalar>() -> Result<FunctionalSystem<S>> {
    let pair = |t: (i64, i64), wt: (i64, i64)| [atom(t, wt), atom((-t.0, t.1), wt)];
    let mut first = vec![atom((0, 1), (1, 8)), minus_one((1, 8))];
    first.extend(pair((1, 2), (1, 8)));
    first.extend(pair((2, 1), (1, 16)));
    first.extend(pair((1, 3), (3, 16)));
    let mut second = Vec::new();
    second.extend(pair((1, 1), (1, 8)));
    second.extend(pair((3, 1), (1, 16)));
    second.extend(pair((1, 7), (1, 4)));
    second.extend(pair((3, 4), (1, 16)));
    FunctionalSystem::new(vec![
        LaurentFunctional::from_atoms(&first)?,
        LaurentFunctional::from_atoms(&second)?,
    ])
}

/// Name and constructor of every bundled system.
pub fn bundled<S: Scalar>() -> Result<Vec<(&'static str, FunctionalSystem<S>)>> {
    Ok(vec![
        ("lebesgue", lebesgue()),
        ("geometric(1/2)", geometric(1, 2)),
        ("s2", s2()?),
        ("three_atomic", three_atomic()?),
        ("symmetric_pair", symmetric_pair()?),
    ])
}

/// Looks up a bundled system by name.
pub fn by_name<S: Scalar>(name: &str) -> Result<Option<FunctionalSystem<S>>> {
    Ok(bundled()?.into_iter().find(|(n, _)| *n == name).map(|(_, s)| s))
}
