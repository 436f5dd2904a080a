//! Scalar algebra over a linearly ordered, radicable idempotent semifield.
//!
//! Two instances ship: [`MaxPlus`] (`max`, `+`, zero `-inf`, unit `0`) and
//! [`MinTimes`] (`min`, `*`, zero `+inf`, unit `1`). The instance is a type
//! parameter of [`Scalar`], so values from different instances cannot meet
//! in one expression.
//!
//! The zero element is stored as a distinct variant rather than as an IEEE
//! infinity. Every operation branches on it explicitly, so no product or sum
//! ever goes through `inf - inf` or `inf * 0`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Operation table of an idempotent semifield on its finite (nonzero) values.
pub trait Semifield:
    Copy + Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static
{
    const NAME: &'static str;
    /// Text used for the zero element in all I/O.
    const ZERO_LITERAL: &'static str;
    /// The IEEE value that denotes the zero element at I/O boundaries.
    const ZERO_FLOAT: f64;
    const ONE: f64;

    fn add(a: f64, b: f64) -> f64;
    fn mul(a: f64, b: f64) -> f64;
    fn inv(a: f64) -> f64;
    fn root(a: f64, k: u32) -> f64;
    /// Semifield order on finite values: `a <= b` iff `a (+) b == b`.
    fn le(a: f64, b: f64) -> bool;
    /// `a <= b` up to an absolute (max-plus) or relative (min-times) tolerance.
    fn le_tol(a: f64, b: f64, tol: f64) -> bool;
    fn is_valid_finite(v: f64) -> bool;
}

/// `(R u {-inf}, max, +)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaxPlus {}

/// `(R_{>0} u {+inf}, min, *)`, ordered by the reverse of the usual order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MinTimes {}

impl Semifield for MaxPlus {
    const NAME: &'static str = "max-plus";
    const ZERO_LITERAL: &'static str = "-inf";
    const ZERO_FLOAT: f64 = f64::NEG_INFINITY;
    const ONE: f64 = 0.0;

    fn add(a: f64, b: f64) -> f64 {
        a.max(b)
    }
    fn mul(a: f64, b: f64) -> f64 {
        a + b
    }
    fn inv(a: f64) -> f64 {
        -a
    }
    fn root(a: f64, k: u32) -> f64 {
        a / f64::from(k)
    }
    fn le(a: f64, b: f64) -> bool {
        a <= b
    }
    fn le_tol(a: f64, b: f64, tol: f64) -> bool {
        a <= b + tol
    }
    fn is_valid_finite(v: f64) -> bool {
        v.is_finite()
    }
}

impl Semifield for MinTimes {
    const NAME: &'static str = "min-times";
    const ZERO_LITERAL: &'static str = "inf";
    const ZERO_FLOAT: f64 = f64::INFINITY;
    const ONE: f64 = 1.0;

    fn add(a: f64, b: f64) -> f64 {
        a.min(b)
    }
    fn mul(a: f64, b: f64) -> f64 {
        a * b
    }
    fn inv(a: f64) -> f64 {
        1.0 / a
    }
    fn root(a: f64, k: u32) -> f64 {
        match k {
            1 => a,
            2 => a.sqrt(),
            3 => a.cbrt(),
            _ => a.powf(1.0 / f64::from(k)),
        }
    }
    fn le(a: f64, b: f64) -> bool {
        a >= b
    }
    fn le_tol(a: f64, b: f64, tol: f64) -> bool {
        a >= b - tol * a.abs().max(b.abs())
    }
    fn is_valid_finite(v: f64) -> bool {
        v.is_finite() && v > 0.0
    }
}

/// An element of the semifield `S`; `None` inside is the zero element.
pub struct Scalar<S> {
    value: Option<f64>,
    _semifield: PhantomData<S>,
}

impl<S> Clone for Scalar<S> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<S> Copy for Scalar<S> {}

impl<S: Semifield> Scalar<S> {
    const fn from_repr(value: Option<f64>) -> Self {
        Self {
            value,
            _semifield: PhantomData,
        }
    }

    pub const fn zero() -> Self {
        Self::from_repr(None)
    }

    pub const fn one() -> Self {
        Self::from_repr(Some(S::ONE))
    }

    /// Builds a scalar from a float. The instance's IEEE infinity maps to
    /// the zero element; anything else outside the value domain is rejected.
    pub fn new(v: f64) -> Result<Self> {
        if v == S::ZERO_FLOAT {
            Ok(Self::zero())
        } else if S::is_valid_finite(v) {
            // normalise -0.0 so rendering and equality stay canonical
            Ok(Self::from_repr(Some(v + 0.0)))
        } else {
            Err(Error::InvalidScalar(v))
        }
    }

    /// Like [`Scalar::new`] but panics on values outside the domain.
    /// Intended for literals.
    pub fn finite(v: f64) -> Self {
        match Self::new(v) {
            Ok(s) => s,
            Err(_) => panic!("{v} is not a {} scalar", S::NAME),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_none()
    }

    /// The finite value, or `None` for the zero element.
    pub fn value(&self) -> Option<f64> {
        self.value
    }

    /// Float view with the zero element mapped to the instance's infinity.
    pub fn to_f64(&self) -> f64 {
        self.value.unwrap_or(S::ZERO_FLOAT)
    }

    pub fn oplus(self, rhs: Self) -> Self {
        match (self.value, rhs.value) {
            (None, _) => rhs,
            (_, None) => self,
            (Some(a), Some(b)) => Self::from_repr(Some(S::add(a, b))),
        }
    }

    pub fn otimes(self, rhs: Self) -> Self {
        match (self.value, rhs.value) {
            (Some(a), Some(b)) => Self::from_repr(Some(S::mul(a, b) + 0.0)),
            _ => Self::zero(),
        }
    }

    pub fn inverse(self) -> Result<Self> {
        match self.value {
            Some(a) => Ok(Self::from_repr(Some(S::inv(a) + 0.0))),
            None => Err(Error::ZeroInverse),
        }
    }

    /// Inverse that maps the zero element to itself, as used by the
    /// conjugate transpose.
    pub fn pseudo_inverse(self) -> Self {
        self.inverse().unwrap_or_else(|_| Self::zero())
    }

    /// The unique `r` with `r^k = self`.
    ///
    /// # Panics
    /// If `k == 0`.
    pub fn kth_root(self, k: u32) -> Self {
        assert!(k >= 1, "root degree must be positive");
        match self.value {
            Some(a) => Self::from_repr(Some(S::root(a, k) + 0.0)),
            None => self,
        }
    }

    /// `self^p`, with `x^0 = 1`.
    pub fn pow(self, p: u32) -> Self {
        (0..p).fold(Self::one(), |acc, _| acc.otimes(self))
    }

    /// `self <= rhs` in the semifield order, i.e. `self (+) rhs == rhs`.
    pub fn leq(self, rhs: Self) -> bool {
        match (self.value, rhs.value) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => S::le(a, b),
        }
    }

    pub fn approx_leq(self, rhs: Self, tol: f64) -> bool {
        match (self.value, rhs.value) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => S::le_tol(a, b, tol),
        }
    }

    /// Equality up to `tol`; the zero element only matches itself.
    pub fn approx_eq(self, rhs: Self, tol: f64) -> bool {
        match (self.value, rhs.value) {
            (None, None) => true,
            (Some(a), Some(b)) => S::le_tol(a, b, tol) && S::le_tol(b, a, tol),
            _ => false,
        }
    }

    /// `self > 1`, the failure condition shared by every feasibility test.
    pub fn exceeds_one(self) -> bool {
        !self.leq(Self::one())
    }
}

impl<S: Semifield> Default for Scalar<S> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Semifield> PartialEq for Scalar<S> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<S: Semifield> PartialOrd for Scalar<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self == other {
            Some(Ordering::Equal)
        } else if self.leq(*other) {
            Some(Ordering::Less)
        } else if other.leq(*self) {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl<S: Semifield> Add for Scalar<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.oplus(rhs)
    }
}

impl<S: Semifield> Mul for Scalar<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.otimes(rhs)
    }
}

impl<S: Semifield> std::iter::Sum for Scalar<S> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), Scalar::oplus)
    }
}

impl<S: Semifield> fmt::Debug for Scalar<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Semifield> fmt::Display for Scalar<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{v}"),
            None => f.write_str(S::ZERO_LITERAL),
        }
    }
}

impl<S: Semifield> FromStr for Scalar<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == S::ZERO_LITERAL {
            return Ok(Self::zero());
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("`{t}` is not a {} scalar", S::NAME)))?;
        Self::new(v).map_err(|_| Error::Parse(format!("`{t}` is outside the {} domain", S::NAME)))
    }
}

impl<S: Semifield> Serialize for Scalar<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self.value {
            Some(v) => serializer.serialize_f64(v),
            None => serializer.serialize_str(S::ZERO_LITERAL),
        }
    }
}

impl<'de, S: Semifield> Deserialize<'de> for Scalar<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => Scalar::new(v).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
