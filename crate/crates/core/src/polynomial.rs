//! Laurent polynomials in one variable and ordinary polynomials on the real side.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finite sum `sum_e a_e z^e`, `e` in `Z`. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct LaurentPoly<S> {
    coeffs: BTreeMap<i64, S>,
}

/// The r-vector of Laurent polynomials used for type I objects.
pub type TypeIVector<S> = Vec<LaurentPoly<S>>;

impl<S: Scalar> Default for LaurentPoly<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, S::one())
    }

    pub fn monomial(exp: i64, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c);
        p
    }

    /// Builds `sum_q coeffs[q] z^(lowest + q)`.
    pub fn from_dense(lowest: i64, coeffs: impl IntoIterator<Item = S>) -> Self {
        let mut p = Self::zero();
        for (q, c) in coeffs.into_iter().enumerate() {
            p.add_term(lowest + q as i64, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: S) {
        if c.is_zero() {
            return;
        }
        let updated = match self.coeffs.remove(&exp) {
            Some(old) => old + c,
            None => c,
        };
        if !updated.is_zero() {
            self.coeffs.insert(exp, updated);
        }
    }

    pub fn coeff(&self, exp: i64) -> S {
        self.coeffs.get(&exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// `true` when every exponent lies in `[lo, hi]`.
    pub fn supported_in(&self, lo: i64, hi: i64) -> bool {
        self.coeffs.keys().all(|&e| lo <= e && e <= hi)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (e, a) in &self.coeffs {
            out.add_term(*e, a.clone() * c.clone());
        }
        out
    }

    /// Multiplies by `z^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e + s, c.clone())).collect() }
    }

    /// `f(1/z)`.
    pub fn reflect(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// `f^sharp(z) = conj(f(1/conj z))`: conjugate coefficients, negate exponents.
    pub fn sharp(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.conj())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn eval(&self, z: &S) -> Result<S> {
        if z.is_zero() && self.min_exp().is_some_and(|e| e < 0) {
            return Err(Error::SingularEvaluation);
        }
        Ok(self
            .coeffs
            .iter()
            .fold(S::zero(), |acc, (e, c)| acc + c.clone() * z.pow_i(*e)))
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.coeffs {
            out.add_term(*e, f(c));
        }
        out
    }

    /// JSON object mapping exponent strings to scalars.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.coeffs {
            m.insert(e.to_string(), c.to_json());
        }
        Value::Object(m)
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{e}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Vector helpers for type I objects.
pub mod vector {
    use super::*;

    pub fn zeros<S: Scalar>(r: usize) -> TypeIVector<S> {
        vec![LaurentPoly::zero(); r]
    }

    pub fn add<S: Scalar>(a: &[LaurentPoly<S>], b: &[LaurentPoly<S>]) -> TypeIVector<S> {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub<S: Scalar>(a: &[LaurentPoly<S>], b: &[LaurentPoly<S>]) -> TypeIVector<S> {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    /// `c * z^s * v`.
    pub fn scale_shift<S: Scalar>(v: &[LaurentPoly<S>], c: &S, s: i64) -> TypeIVector<S> {
        v.iter().map(|x| x.scale(c).shift(s)).collect()
    }

    pub fn sharp<S: Scalar>(v: &[LaurentPoly<S>]) -> TypeIVector<S> {
        v.iter().map(LaurentPoly::sharp).collect()
    }

    pub fn reflect<S: Scalar>(v: &[LaurentPoly<S>]) -> TypeIVector<S> {
        v.iter().map(LaurentPoly::reflect).collect()
    }

    pub fn to_json<S: Scalar>(v: &[LaurentPoly<S>]) -> Value {
        Value::Array(v.iter().map(LaurentPoly::to_json).collect())
    }
}

/// Ordinary polynomial `sum_{d} a_d x^d`, dense by degree.
#[derive(Clone, PartialEq)]
pub struct RealPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> RealPoly<S> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![S::one()])
    }

    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `x^d` (zero past the degree).
    pub fn coeff(&self, d: usize) -> S {
        self.coeffs.get(d).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|d| self.coeff(d) + other.coeff(d)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|d| self.coeff(d) - other.coeff(d)).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![S::zero()];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn max_magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Laurent polynomial `P(z + 1/z)`, expanded with binomial coefficients.
    pub fn substitute_joukowski(&self) -> LaurentPoly<S> {
        let mut out = LaurentPoly::zero();
        let mut row: Vec<S> = vec![S::one()];
        for (d, a) in self.coeffs.iter().enumerate() {
            if d > 0 {
                let mut next = vec![S::one(); d + 1];
                for i in 1..d {
                    next[i] = row[i - 1].clone() + row[i].clone();
                }
                row = next;
            }
            for (i, b) in row.iter().enumerate() {
                out.add_term(d as i64 - 2 * i as i64, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(Scalar::to_json).collect())
    }
}

impl<S: Scalar> fmt::Debug for RealPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealPoly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(p: i64) -> Q {
        Q::from_i64(p)
    }

    #[test]
    fn zero_terms_are_trimmed() {
        let mut p = LaurentPoly::monomial(2, q(3));
        p.add_term(2, q(-3));
        assert!(p.is_zero());
        assert_eq!(LaurentPoly::<Q>::monomial(5, q(0)).len(), 0);
    }

    #[test]
    fn sharp_and_reflect() {
        let p = LaurentPoly::from_dense(-1, vec![Q::i(), q(2), q(0), q(5)]);
        assert_eq!(p.sharp().coeff(1), -Q::i());
        assert_eq!(p.reflect().coeff(-2), q(5));
        assert_eq!(p.sharp().sharp(), p);
    }

    #[test]
    fn eval_and_product() {
        let a = LaurentPoly::from_dense(-1, vec![q(1), q(1)]); // z^-1 + 1
        let b = LaurentPoly::from_dense(0, vec![q(-1), q(1)]); // z - 1
        let ab = a.mul(&b); // (1 + z^-1)(z - 1) = z - z^-1
        assert_eq!(ab, LaurentPoly::monomial(1, q(1)).sub(&LaurentPoly::monomial(-1, q(1))));
        assert_eq!(ab.eval(&q(2)).unwrap(), Q::from_ratio(3, 2));
        assert_eq!(ab.eval(&q(0)), Err(Error::SingularEvaluation));
    }

    #[test]
    fn joukowski_substitution() {
        // x^2 - 2 at x = z + 1/z is z^2 + z^-2
        let p = RealPoly::new(vec![q(-2), q(0), q(1)]);
        let lp = p.substitute_joukowski();
        assert_eq!(lp, LaurentPoly::monomial(2, q(1)).add(&LaurentPoly::monomial(-2, q(1))));
        let cube = RealPoly::new(vec![q(0), q(0), q(0), q(1)]).substitute_joukowski();
        assert_eq!(cube.coeff(1), q(3));
        assert_eq!(cube.coeff(-3), q(1));
    }
}
