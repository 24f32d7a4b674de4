//! Precision-polymorphic real scalar.
//!
//! Every quantity in this crate is a [`Real`]: either a plain `f64`
//! (fast path) or an MPFR float carrying a configurable number of
//! significant decimal digits (extended path, at least 30). All
//! operations are deterministic for a fixed [`PrecisionMode`], and a
//! binary operation between two `Real`s of different modes is a
//! programming error (it panics); mixing with `f64` literals is allowed
//! and converts the literal exactly.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Guard bits added on top of the requested decimal precision.
const GUARD_BITS: u32 = 16;

/// Working precision selector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PrecisionMode {
    /// IEEE 754 binary64 (~16 significant decimal digits).
    Double,
    /// MPFR-backed float with `digits` significant decimal digits.
    Extended { digits: u32 },
}

impl PrecisionMode {
    /// Minimum digit count honoured by the extended mode.
    pub const MIN_EXTENDED_DIGITS: u32 = 30;

    /// Extended mode with at least [`Self::MIN_EXTENDED_DIGITS`] digits.
    pub fn extended(digits: u32) -> Self {
        PrecisionMode::Extended {
            digits: digits.max(Self::MIN_EXTENDED_DIGITS),
        }
    }

    /// Significant decimal digits carried by values in this mode.
    pub fn sig_digits(self) -> u32 {
        match self {
            PrecisionMode::Double => 16,
            PrecisionMode::Extended { digits } => digits,
        }
    }

    /// Unit roundoff, as an `f64` order of magnitude.
    pub fn epsilon(self) -> f64 {
        match self {
            PrecisionMode::Double => f64::EPSILON,
            PrecisionMode::Extended { digits } => 10f64.powi(-(digits as i32)),
        }
    }

    pub(crate) fn prec_bits(self) -> u32 {
        match self {
            PrecisionMode::Double => 53,
            PrecisionMode::Extended { digits } => {
                (digits as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
            }
        }
    }

    /// Lift an `f64` into this mode (exact: binary64 embeds in MPFR).
    pub fn real(self, v: f64) -> Real {
        match self {
            PrecisionMode::Double => Real(Repr::Double(v)),
            PrecisionMode::Extended { .. } => {
                Real(Repr::Extended(Float::with_val(self.prec_bits(), v)))
            }
        }
    }

    pub fn zero(self) -> Real {
        self.real(0.0)
    }

    pub fn one(self) -> Real {
        self.real(1.0)
    }

    /// π at working precision.
    pub fn pi(self) -> Real {
        match self {
            PrecisionMode::Double => self.real(std::f64::consts::PI),
            PrecisionMode::Extended { .. } => Real(Repr::Extended(Float::with_val(
                self.prec_bits(),
                Constant::Pi,
            ))),
        }
    }

    /// Round an exact rational into this mode (single rounding).
    pub fn from_rational(self, r: &Rational) -> Real {
        match self {
            PrecisionMode::Double => self.real(r.to_f64()),
            PrecisionMode::Extended { .. } => {
                Real(Repr::Extended(Float::with_val(self.prec_bits(), r)))
            }
        }
    }
}

impl fmt::Display for PrecisionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrecisionMode::Double => write!(f, "double"),
            PrecisionMode::Extended { digits } => write!(f, "extended:{digits}"),
        }
    }
}

impl std::str::FromStr for PrecisionMode {
    type Err = Error;

    /// Parses `"double"` or `"extended:<digits>"` (as printed by
    /// `Display`).
    fn from_str(s: &str) -> Result<Self> {
        if s == "double" {
            return Ok(PrecisionMode::Double);
        }
        if let Some(digits) = s.strip_prefix("extended:") {
            let digits: u32 = digits.parse().map_err(|_| {
                Error::Config(format!("invalid digit count in precision '{s}'"))
            })?;
            if digits < Self::MIN_EXTENDED_DIGITS {
                return Err(Error::Config(format!(
                    "extended precision needs at least {} digits, got {digits}",
                    Self::MIN_EXTENDED_DIGITS
                )));
            }
            return Ok(PrecisionMode::Extended { digits });
        }
        Err(Error::Config(format!(
            "unknown precision '{s}' (expected 'double' or 'extended:<digits>')"
        )))
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Double(f64),
    Extended(Float),
}

/// Scalar value tied to a [`PrecisionMode`].
#[derive(Clone, Debug)]
pub struct Real(Repr);

fn digits_for_bits(bits: u32) -> u32 {
    ((bits - GUARD_BITS) as f64 / LOG2_10).floor() as u32
}

impl Real {
    pub fn mode(&self) -> PrecisionMode {
        match &self.0 {
            Repr::Double(_) => PrecisionMode::Double,
            Repr::Extended(f) => PrecisionMode::Extended {
                digits: digits_for_bits(f.prec()),
            },
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Double(v) => *v,
            Repr::Extended(f) => f.to_f64(),
        }
    }

    /// Exact widening into an MPFR float of `prec` bits (no re-rounding
    /// when `prec` exceeds the carried precision). Intended for
    /// cross-checking against external references.
    pub fn to_float(&self, prec: u32) -> Float {
        match &self.0 {
            Repr::Double(v) => Float::with_val(prec, *v),
            Repr::Extended(f) => Float::with_val(prec, f),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.0 {
            Repr::Double(v) => v.is_finite(),
            Repr::Extended(f) => f.is_finite(),
        }
    }

    pub fn is_nan(&self) -> bool {
        match &self.0 {
            Repr::Double(v) => v.is_nan(),
            Repr::Extended(f) => f.is_nan(),
        }
    }

    pub fn abs(&self) -> Real {
        self.map(f64::abs, |f| f.abs())
    }

    pub fn exp(&self) -> Real {
        self.map(f64::exp, |f| f.exp())
    }

    /// `exp(self) - 1`, accurate near zero.
    pub fn exp_m1(&self) -> Real {
        self.map(f64::exp_m1, |f| f.exp_m1())
    }

    /// `ln(1 + self)`, accurate near zero.
    pub fn ln_1p(&self) -> Real {
        self.map(f64::ln_1p, |f| f.ln_1p())
    }

    /// Natural logarithm; the caller guarantees a positive argument.
    pub fn ln(&self) -> Real {
        self.map(f64::ln, |f| f.ln())
    }

    pub fn sqrt(&self) -> Real {
        self.map(f64::sqrt, |f| f.sqrt())
    }

    pub fn recip(&self) -> Real {
        self.map(f64::recip, |f| f.recip())
    }

    pub fn powi(&self, k: i32) -> Real {
        match &self.0 {
            Repr::Double(v) => Real(Repr::Double(v.powi(k))),
            Repr::Extended(f) => {
                let prec = f.prec();
                Real(Repr::Extended(Float::with_val(prec, f.pow(k))))
            }
        }
    }

    pub fn min(&self, other: &Real) -> Real {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Real) -> Real {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    fn map(&self, fd: impl FnOnce(f64) -> f64, fx: impl FnOnce(Float) -> Float) -> Real {
        match &self.0 {
            Repr::Double(v) => Real(Repr::Double(fd(*v))),
            Repr::Extended(f) => Real(Repr::Extended(fx(f.clone()))),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Double(v) => write!(f, "{v:.17e}"),
            Repr::Extended(x) => {
                let digits = digits_for_bits(x.prec()) as usize;
                write!(f, "{}", x.to_string_radix(10, Some(digits)))
            }
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        match (&self.0, &other.0) {
            (Repr::Double(a), Repr::Double(b)) => a == b,
            (Repr::Extended(a), Repr::Extended(b)) => a == b,
            _ => panic!("mixed precision modes in comparison"),
        }
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<std::cmp::Ordering> {
        match (&self.0, &other.0) {
            (Repr::Double(a), Repr::Double(b)) => a.partial_cmp(b),
            (Repr::Extended(a), Repr::Extended(b)) => a.partial_cmp(b),
            _ => panic!("mixed precision modes in comparison"),
        }
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        match &self.0 {
            Repr::Double(a) => a == other,
            Repr::Extended(a) => a == other,
        }
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<std::cmp::Ordering> {
        match &self.0 {
            Repr::Double(a) => a.partial_cmp(other),
            Repr::Extended(a) => a.partial_cmp(other),
        }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        match &self.0 {
            Repr::Double(v) => Real(Repr::Double(-v)),
            Repr::Extended(f) => {
                let prec = f.prec();
                Real(Repr::Extended(Float::with_val(prec, -f)))
            }
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                match (&self.0, &rhs.0) {
                    (Repr::Double(a), Repr::Double(b)) => Real(Repr::Double($trait::$method(a, b))),
                    (Repr::Extended(a), Repr::Extended(b)) => {
                        let prec = a.prec().max(b.prec());
                        Real(Repr::Extended(Float::with_val(prec, $trait::$method(a, b))))
                    }
                    _ => panic!("mixed precision modes in arithmetic"),
                }
            }
        }

        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(self, &rhs)
            }
        }

        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                $trait::$method(&self, rhs)
            }
        }

        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(&self, &rhs)
            }
        }

        impl $trait<f64> for &Real {
            type Output = Real;
            fn $method(self, rhs: f64) -> Real {
                match &self.0 {
                    Repr::Double(a) => Real(Repr::Double($trait::$method(a, rhs))),
                    Repr::Extended(a) => {
                        let prec = a.prec();
                        Real(Repr::Extended(Float::with_val(
                            prec,
                            $trait::$method(a, rhs),
                        )))
                    }
                }
            }
        }

        impl $trait<f64> for Real {
            type Output = Real;
            fn $method(self, rhs: f64) -> Real {
                $trait::$method(&self, rhs)
            }
        }

        impl $trait<&Real> for f64 {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                match &rhs.0 {
                    Repr::Double(b) => Real(Repr::Double($trait::$method(self, b))),
                    Repr::Extended(b) => {
                        let prec = b.prec();
                        let lifted = Float::with_val(prec, self);
                        Real(Repr::Extended(Float::with_val(
                            prec,
                            $trait::$method(&lifted, b),
                        )))
                    }
                }
            }
        }

        impl $trait<Real> for f64 {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(self, &rhs)
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);
