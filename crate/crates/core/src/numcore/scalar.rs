//! Scalar backends.
//!
//! Three backends share one trait: exact rationals ([`Rational`]), binary64
//! floats (`f64`) and double-double floats ([`Dd`], ~32 significant digits).
//! Exact values never consult a tolerance; float values treat anything below
//! the scaled `eps_sign` threshold as zero.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero as _};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

/// Arbitrary precision rational number.
pub type Rational = num_rational::BigRational;

/// Double-double float (~32 significant digits).
///
/// Wraps [`TwoFloat`] for storage, addition and multiplication; division is
/// done here by residual correction because the upstream quotient of two
/// double-doubles is only accurate to binary64.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Dd(TwoFloat);

impl Dd {
    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }

    /// Sum of two doubles without rounding (`|hi| >= |lo|` not required).
    pub fn from_parts(hi: f64, lo: f64) -> Dd {
        Dd(TwoFloat::new_add(hi, lo))
    }

    pub fn exp(self) -> Dd {
        Dd(self.0.exp())
    }

    pub fn ln(self) -> Dd {
        Dd(self.0.ln())
    }

    pub fn cos(self) -> Dd {
        Dd(self.0.cos())
    }

    pub fn sin(self) -> Dd {
        Dd(self.0.sin())
    }

    pub fn pi() -> Dd {
        Dd(twofloat::consts::PI)
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd(TwoFloat::from(v))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, rhs: Dd) -> Dd {
        Dd(self.0 + rhs.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, rhs: Dd) -> Dd {
        Dd(self.0 - rhs.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, rhs: Dd) -> Dd {
        Dd(self.0 * rhs.0)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, rhs: Dd) -> Dd {
        let b = rhs.0;
        let q1 = self.0.hi() / b.hi();
        let r = self.0 - b * q1;
        let q2 = r.hi() / b.hi();
        let r = r - b * q2;
        let q3 = r.hi() / b.hi();
        Dd(TwoFloat::new_add(q1, q2) + q3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        match self.as_i8() * other.as_i8() {
            1 => Sign::Pos,
            -1 => Sign::Neg,
            _ => Sign::Zero,
        }
    }
}

/// Zero thresholds for float sign decisions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Below `eps_sign * scale` a float counts as zero.
    pub eps_sign: f64,
    /// Equality threshold for derived quantities (residuals, flag equality).
    pub eps_eq: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_sign: 1e-9,
            eps_eq: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(eps_sign: f64, eps_eq: f64) -> Result<Self, String> {
        if !(eps_sign > 0.0) {
            return Err(format!("eps_sign must be positive, got {eps_sign}"));
        }
        if !(eps_eq >= eps_sign) {
            return Err(format!("eps_eq ({eps_eq}) must be >= eps_sign ({eps_sign})"));
        }
        Ok(Tolerance { eps_sign, eps_eq })
    }

    /// Relative zero threshold for a quantity of magnitude `scale`.
    pub fn sign_threshold(&self, scale: f64) -> f64 {
        self.eps_sign * scale.max(1.0)
    }

    /// Default thresholds, with the sign threshold lowered on backends more
    /// precise than `f64`.
    pub fn for_scalar<T: Scalar>() -> Tolerance {
        if T::EPSILON > 0.0 && T::EPSILON < f64::EPSILON * 1e-8 {
            Tolerance::default().tightened(1e11)
        } else {
            Tolerance::default()
        }
    }

    /// Same context with `eps_sign` divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Tolerance {
        Tolerance {
            eps_sign: self.eps_sign / factor,
            eps_eq: self.eps_eq,
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
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
    const EXACT: bool;
    const NAME: &'static str;
    /// Unit roundoff; zero on the exact backend.
    const EPSILON: f64;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact for rationals (every finite double is dyadic).
    fn from_f64(v: f64) -> Self;
    fn from_ratio(p: i64, q: i64) -> Self {
        Self::from_i64(p) / Self::from_i64(q)
    }
    fn to_f64(&self) -> f64;
    /// Exact zero test (no tolerance).
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    /// Square root; `None` for negative input or when the root leaves the backend.
    fn sqrt(&self) -> Option<Self>;
    /// Sign under an absolute float threshold; exact backends ignore it.
    fn sign_with(&self, threshold: f64) -> Sign;

    fn sign(&self, tol: &Tolerance, scale: f64) -> Sign {
        self.sign_with(tol.sign_threshold(scale))
    }

    /// Exact sign: the float backends compare against zero.
    fn exact_sign(&self) -> Sign {
        self.sign_with(0.0)
    }

    fn half() -> Self {
        Self::one() / Self::from_i64(2)
    }

    /// Rounds through f64 on the float backends.
    fn from_rational(r: &Rational) -> Self {
        Self::from_f64(ToPrimitive::to_f64(r).unwrap_or(f64::NAN))
    }

    /// `"p/q"` text for exact values.
    fn exact_string(&self) -> Option<String> {
        None
    }
}

fn float_sign(x: f64, threshold: f64) -> Sign {
    if x.abs() <= threshold {
        Sign::Zero
    } else if x > 0.0 {
        Sign::Pos
    } else {
        Sign::Neg
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "f64";
    const EPSILON: f64 = f64::EPSILON;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }
    fn sign_with(&self, threshold: f64) -> Sign {
        float_sign(*self, threshold)
    }
}

impl Scalar for Dd {
    const EXACT: bool = false;
    const NAME: &'static str = "dd";
    const EPSILON: f64 = f64::EPSILON * f64::EPSILON;

    fn zero() -> Self {
        Dd::from(0.0)
    }
    fn one() -> Self {
        Dd::from(1.0)
    }
    fn from_i64(v: i64) -> Self {
        Dd(TwoFloat::from(v))
    }
    fn from_f64(v: f64) -> Self {
        Dd::from(v)
    }
    fn to_f64(&self) -> f64 {
        self.hi() + self.lo()
    }
    fn is_zero(&self) -> bool {
        self.hi() == 0.0
    }
    fn abs(&self) -> Self {
        if self.hi() < 0.0 {
            -*self
        } else {
            *self
        }
    }
    fn sqrt(&self) -> Option<Self> {
        if self.hi() < 0.0 {
            None
        } else if self.hi() == 0.0 {
            Some(Dd::from(0.0))
        } else {
            // One Newton step from the binary64 root doubles the digits.
            let y = Dd::from(self.hi().sqrt());
            Some((y + *self / y) * Dd::from(0.5))
        }
    }
    fn sign_with(&self, threshold: f64) -> Sign {
        float_sign(self.hi(), threshold)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "exact";
    const EPSILON: f64 = 0.0;

    fn zero() -> Self {
        <Rational as num_traits::Zero>::zero()
    }
    fn one() -> Self {
        Rational::from_integer(BigInt::from(1))
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite float")
    }
    fn from_ratio(p: i64, q: i64) -> Self {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        (&num * &num == *self.numer() && &den * &den == *self.denom())
            .then(|| Rational::new(num, den))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn exact_string(&self) -> Option<String> {
        Some(rational_to_string(self))
    }
    fn sign_with(&self, _threshold: f64) -> Sign {
        if self.is_positive() {
            Sign::Pos
        } else if self.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }
}

/// Formats an exact rational as `"p/q"` (or `"p"` for integers).
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Rational::new(parse_int(p)?, q))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}
