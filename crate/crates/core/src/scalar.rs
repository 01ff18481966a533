//! Scalar fields used throughout the crate.
//!
//! Every algorithm is generic over [`Scalar`]. Two implementations are
//! provided: [`GaussianRational`], an exact field `Q(i)` backed by
//! arbitrary-precision rationals (`dashu`), and [`ComplexFloat`], a thin wrapper over
//! `Complex<f64>` whose equality tests go through a relative tolerance.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::{IBig, UBig};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::Error;

/// Default relative tolerance of the floating path.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

/// A field closed under the four operations and complex conjugation.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// `true` for fields where equality is decidable and bit-exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Embeds an exact Gaussian rational (rounding for the float field).
    fn from_exact(v: &GaussianRational) -> Self;
    fn conj(&self) -> Self;
    /// Exact comparison against zero. The float field only reports literal zeros.
    fn is_zero(&self) -> bool;
    /// `|x|` as a double.
    fn magnitude(&self) -> f64;
    fn to_json(&self) -> Value;
    /// Nearest double-precision complex value.
    fn to_c64(&self) -> Complex64;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// A nonzero factor that turns every entry of `row` into an integer of
    /// the field, when that notion exists; 1 otherwise.
    fn clearing_factor(_row: &[Self]) -> Self {
        Self::one()
    }

    /// Exact scalars compare bit-exactly and ignore `tol`; approximate scalars
    /// pass when `|a - b| <= tol * max(1, |a|, |b|)`.
    fn approx_equal(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let diff = (self.clone() - other.clone()).magnitude();
        diff <= tol * 1f64.max(self.magnitude()).max(other.magnitude())
    }

    /// Zero test used by verification: exact zero, or `|x| <= tol * scale`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= FLOAT_TOLERANCE * scale.max(1.0)
        }
    }

    fn pow_i(&self, e: i64) -> Self {
        let mut base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Arbitrary-precision rational, always in lowest terms.
pub type Rational = dashu_ratio::RBig;

fn ratio(p: i64, q: i64) -> Rational {
    Rational::from_parts_signed(IBig::from(p), IBig::from(q))
}

/// Exact element `re + i*im` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::ZERO }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::real(ratio(p, q))
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        Self::new(
            ratio(re.0, re.1),
            ratio(im.0, im.1),
        )
    }

    pub fn i() -> Self {
        Self::new(Rational::ZERO, Rational::ONE)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|x|^2`, exactly.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().value(),
            self.im.to_f64().value(),
        )
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("malformed rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = IBig::from_str(p.trim()).map_err(|_| bad())?;
            let q = IBig::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::from_parts_signed(p, q))
        }
        None => Ok(Rational::from_parts(IBig::from_str(s).map_err(|_| bad())?, UBig::ONE)),
    }
}

pub fn format_rational(x: &Rational) -> String {
    format!("{}/{}", x.numerator(), x.denominator())
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.sign() == dashu_int::Sign::Negative {
            write!(f, "({} - {}i)", self.re, -self.im.clone())
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(self.re * rhs.re);
        }
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!Scalar::is_zero(&rhs), "division by zero in Q(i)");
        if rhs.im.is_zero() {
            return Self::new(self.re / &rhs.re, self.im / rhs.re);
        }
        let den = rhs.norm_sqr();
        let re = (&self.re * &rhs.re + &self.im * &rhs.im) / &den;
        let im = (&self.im * &rhs.re - &self.re * &rhs.im) / den;
        Self::new(re, im)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Self::real(Rational::ZERO)
    }
    fn one() -> Self {
        Self::real(Rational::ONE)
    }
    fn from_i64(v: i64) -> Self {
        Self::real(Rational::from(v))
    }
    fn from_exact(v: &GaussianRational) -> Self {
        v.clone()
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }
    fn to_json(&self) -> Value {
        json!({ "re": format_rational(&self.re), "im": format_rational(&self.im) })
    }
    fn to_c64(&self) -> Complex64 {
        self.to_complex64()
    }
    fn clearing_factor(row: &[Self]) -> Self {
        let mut l = UBig::ONE;
        for x in row {
            for d in [x.re.denominator(), x.im.denominator()] {
                if !d.is_one() {
                    let g = dashu_int::ops::Gcd::gcd(&l, d);
                    l = &l / g * d;
                }
            }
        }
        Self::real(Rational::from_parts(IBig::from(l), UBig::ONE))
    }
}

/// Double-precision complex number; equality is tolerance based.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexFloat(pub Complex64);

impl ComplexFloat {
    pub fn new(re: f64, im: f64) -> Self {
        Self(Complex64::new(re, im))
    }

    /// Point `e^{i theta}` on the unit circle.
    pub fn unimodular(theta: f64) -> Self {
        Self(Complex64::from_polar(1.0, theta))
    }
}

impl fmt::Display for ComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{:e}", self.0.re)
        } else {
            write!(f, "({:e} {:+e}i)", self.0.re, self.0.im)
        }
    }
}

impl fmt::Debug for ComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! float_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for ComplexFloat {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                Self(self.0 $op rhs.0)
            }
        }
    };
}
float_binop!(Add, add, +);
float_binop!(Sub, sub, -);
float_binop!(Mul, mul, *);
float_binop!(Div, div, /);

impl Neg for ComplexFloat {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl Scalar for ComplexFloat {
    const EXACT: bool = false;

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Self::new(v as f64, 0.0)
    }
    fn from_exact(v: &GaussianRational) -> Self {
        Self(v.to_complex64())
    }
    fn conj(&self) -> Self {
        Self(self.0.conj())
    }
    fn is_zero(&self) -> bool {
        self.0.re == 0.0 && self.0.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.0.norm()
    }
    fn to_json(&self) -> Value {
        json!({ "re": self.0.re, "im": self.0.im })
    }
    fn to_c64(&self) -> Complex64 {
        self.0
    }
}

/// Decodes a scalar literal from its JSON encoding into the field `S`.
///
/// Accepted shapes: `{"re": "p/q", "im": "p/q"}` (exact), `{"re": x, "im": y}`
/// with numbers (float field only), or a bare `"p/q"` string for a real value.
pub fn scalar_from_json<S: Scalar>(v: &Value) -> Result<S, Error> {
    match v {
        Value::String(s) => Ok(S::from_exact(&GaussianRational::real(parse_rational(s)?))),
        Value::Object(map) => {
            let re = map.get("re").ok_or_else(|| Error::InvalidInput("scalar missing `re`".into()))?;
            let im = map.get("im").cloned().unwrap_or(Value::String("0".into()));
            match (re, &im) {
                (Value::String(a), Value::String(b)) => Ok(S::from_exact(&GaussianRational::new(
                    parse_rational(a)?,
                    parse_rational(b)?,
                ))),
                (Value::Number(a), Value::Number(b)) if !S::EXACT => {
                    let a = a.as_f64().unwrap_or(f64::NAN);
                    let b = b.as_f64().unwrap_or(f64::NAN);
                    Ok(float_literal::<S>(a, b))
                }
                (Value::Number(_), _) => Err(Error::InvalidInput(
                    "numeric scalar literals are only allowed in the float field".into(),
                )),
                _ => Err(Error::InvalidInput(format!("malformed scalar {v}"))),
            }
        }
        Value::Number(n) if !S::EXACT => Ok(float_literal::<S>(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Number(n) if n.is_i64() => Ok(S::from_i64(n.as_i64().unwrap())),
        _ => Err(Error::InvalidInput(format!("malformed scalar {v}"))),
    }
}

pub(crate) fn float_literal<S: Scalar>(re: f64, im: f64) -> S {
    // Exact conversion of the double's binary value keeps the float path faithful.
    let to_q = |x: f64| Rational::try_from(x).unwrap_or(Rational::ZERO);
    S::from_exact(&GaussianRational::new(to_q(re), to_q(im)))
}
