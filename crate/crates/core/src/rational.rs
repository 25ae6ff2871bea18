//! Exact rational numbers.
//!
//! Thin wrapper around `num_rational::BigRational` that fixes the external
//! representation: canonical reduced form, `"p/q"` (or `"p"`) in JSON and on
//! the wire, and half-up rounding for the discretization code.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn int(v: i128) -> Self {
        Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn frac(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        Ok(Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub(crate) fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidRational(format!("{num}/{den}")));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Rat {
        Rat(self.0.pow(exp as i32))
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::InvalidRational("1/0".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn ceil_i128(&self) -> Result<i128> {
        self.ceil_int().to_i128().ok_or(Error::Overflow)
    }

    pub fn floor_i128(&self) -> Result<i128> {
        self.floor_int().to_i128().ok_or(Error::Overflow)
    }

    /// Nearest integer, ties rounded toward positive infinity.
    pub fn round_half_up(&self) -> BigInt {
        (&self.0 + BigRational::new(BigInt::from(1), BigInt::from(2))).floor().to_integer()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            None => {
                let v = BigInt::from_str(s).map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(v)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact comparison helper: `a < b`, `a <= b`.
pub fn lt(a: &Rat, b: &Rat) -> bool {
    a.cmp(b) == Ordering::Less
}

pub fn le(a: &Rat, b: &Rat) -> bool {
    a.cmp(b) != Ordering::Greater
}
