//! Coefficient scalars.
//!
//! Two coefficient towers share one interface: [`Exact`] holds a complex
//! number with arbitrary-precision rational parts, [`Float`] a pair of
//! doubles. Every algebraic routine in the crate is generic over
//! [`Scalar`], so the two modes cannot be mixed within one computation.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

/// Which coefficient tower a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = ParseNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(ParseNumberError(s.to_string())),
        }
    }
}

/// Comparison tolerance for floating coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance { rel: 1e-12, abs: 1e-14 };

    pub fn close(&self, a: Complex64, b: Complex64) -> bool {
        let diff = (a - b).norm();
        diff <= self.abs || diff <= self.rel * a.norm().max(b.norm())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// A complex coefficient in either mode.
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
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(q: &BigRational) -> Self;
    fn from_parts(re: &BigRational, im: &BigRational) -> Self;

    /// Exact zero test, or `|z|` below the absolute floor in float mode.
    fn is_zero(&self) -> bool;
    fn approx_eq_with(&self, other: &Self, tol: Tolerance) -> bool;

    fn to_complex64(&self) -> Complex64;

    fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_with(other, Tolerance::DEFAULT)
    }

    fn re(&self) -> f64 {
        self.to_complex64().re
    }

    fn im(&self) -> f64 {
        self.to_complex64().im
    }

    fn abs(&self) -> f64 {
        self.to_complex64().norm()
    }

    /// Imaginary part is (exactly, or within tolerance) zero.
    fn is_real(&self) -> bool;

    fn is_one(&self) -> bool {
        (self.clone() - Self::one()).is_zero()
    }

    fn square(&self) -> Self {
        self.clone() * self
    }
}

/// Exact complex rational.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exact(pub Complex<BigRational>);

/// Double-precision complex.
#[derive(Clone, Copy, PartialEq)]
pub struct Float(pub Complex64);

impl Exact {
    pub fn real(q: BigRational) -> Self {
        Exact(Complex::new(q, BigRational::zero()))
    }

    pub fn re_ratio(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im_ratio(&self) -> &BigRational {
        &self.0.im
    }

    /// Exact squared modulus.
    pub fn norm_sqr(&self) -> BigRational {
        &self.0.re * &self.0.re + &self.0.im * &self.0.im
    }
}

impl Float {
    pub fn new(re: f64, im: f64) -> Self {
        Float(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        Float(Complex64::new(x, 0.0))
    }

    pub fn from_polar(modulus: f64, phase: f64) -> Self {
        Float(Complex64::from_polar(modulus, phase))
    }
}

impl fmt::Debug for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im.is_zero() {
            write!(f, "{}", self.0.re)
        } else if self.0.im.is_negative() {
            write!(f, "{}-{}i", self.0.re, -&self.0.im)
        } else {
            write!(f, "{}+{}i", self.0.re, self.0.im)
        }
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.im == 0.0 {
            write!(f, "{}", self.0.re)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

macro_rules! forward_ops {
    ($ty:ident) => {
        forward_ops!(@op $ty, Add, add, +);
        forward_ops!(@op $ty, Sub, sub, -);
        forward_ops!(@op $ty, Mul, mul, *);
        forward_ops!(@op $ty, Div, div, /);

        impl Neg for $ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-self.0)
            }
        }

        impl Neg for &$ty {
            type Output = $ty;
            fn neg(self) -> $ty {
                $ty(-self.0.clone())
            }
        }
    };
    (@op $ty:ident, $tr:ident, $m:ident, $o:tt) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                $ty(self.0 $o rhs.0)
            }
        }

        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                $ty(self.0 $o &rhs.0)
            }
        }

        impl<'a> $tr<&'a $ty> for &'a $ty {
            type Output = $ty;
            fn $m(self, rhs: &'a $ty) -> $ty {
                $ty(&self.0 $o &rhs.0)
            }
        }
    };
}

forward_ops!(Exact);
forward_ops!(Float);

impl Scalar for Exact {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Exact(Complex::zero())
    }

    fn one() -> Self {
        Exact(Complex::one())
    }

    fn from_int(n: i64) -> Self {
        Exact::real(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_ratio(q: &BigRational) -> Self {
        Exact::real(q.clone())
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Exact(Complex::new(re.clone(), im.clone()))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn approx_eq_with(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.0.re), ratio_to_f64(&self.0.im))
    }

    fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }
}

impl Scalar for Float {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Float(Complex64::new(0.0, 0.0))
    }

    fn one() -> Self {
        Float(Complex64::new(1.0, 0.0))
    }

    fn from_int(n: i64) -> Self {
        Float::real(n as f64)
    }

    fn from_ratio(q: &BigRational) -> Self {
        Float::real(ratio_to_f64(q))
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Self {
        Float::new(ratio_to_f64(re), ratio_to_f64(im))
    }

    fn is_zero(&self) -> bool {
        self.0.norm() < Tolerance::DEFAULT.abs
    }

    fn approx_eq_with(&self, other: &Self, tol: Tolerance) -> bool {
        tol.close(self.0, other.0)
    }

    fn to_complex64(&self) -> Complex64 {
        self.0
    }

    fn is_real(&self) -> bool {
        self.0.im.abs() <= Tolerance::DEFAULT.abs.max(Tolerance::DEFAULT.rel * self.0.re.abs())
    }
}

/// Nearest double to a rational (saturating on overflow).
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(x) = q.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // numerator/denominator beyond f64 range: scale both down
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("cannot parse `{0}` as an exact number")]
pub struct ParseNumberError(pub String);

/// Parses `3`, `-0.25`, `1.5e-2` or `7/20` into an exact rational.
///
/// Decimal strings are read exactly: `0.1` is one tenth, not the nearest
/// double.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseNumberError> {
    let err = || ParseNumberError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| err())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| err())? };
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut q = BigRational::from_integer(numer);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}
