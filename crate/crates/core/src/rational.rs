//! Exact rational arithmetic for breakpoint coordinates and function values.
//!
//! All coordinates in this crate are rationals over `i128`. Inputs come from
//! text files as `p/q` fractions or decimal literals, both parsed exactly, so
//! values like `13/80` survive every computation bit-for-bit.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number. Denominator is always positive and the fraction
/// is kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub fn new(numer: i128, denom: i128) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(Ratio::new(numer, denom))
    }

    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    pub fn from_int(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Halve the value. Used all over the bound formulas.
    pub fn half(self) -> Self {
        self / Rational::from_int(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().expect("rational out of f64 range")
    }

    pub fn in_unit_interval(&self) -> bool {
        *self >= Rational::ZERO && *self <= Rational::ONE
    }

    /// Format as a decimal with `precision` digits after the point,
    /// rounding to nearest (ties away from zero). Deterministic.
    pub fn to_decimal_string(&self, precision: usize) -> String {
        let neg = self.0.is_negative();
        let r = self.0.abs();
        let mut scale: i128 = 1;
        for _ in 0..precision {
            scale = scale.checked_mul(10).expect("precision too large");
        }
        // round(r * scale)
        let scaled = r * Ratio::from_integer(scale);
        let floor = scaled.floor().to_integer();
        let frac = scaled - Ratio::from_integer(floor);
        let rounded = if frac * Ratio::from_integer(2) >= Ratio::from_integer(1) {
            floor + 1
        } else {
            floor
        };
        let int_part = rounded / scale;
        let frac_part = rounded % scale;
        let sign = if neg && rounded != 0 { "-" } else { "" };
        if precision == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part:0width$}", width = precision)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parse `p/q`, an integer, or a decimal literal. Decimals convert
    /// exactly (`0.1625` becomes `13/80`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::ParseNumber(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            return Ok(Rational::new(p, q));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: i128 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || frac.len() > 27 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: i128 = frac.parse().map_err(|_| bad())?;
            let mut scale: i128 = 1;
            for _ in 0..frac.len() {
                scale *= 10;
            }
            let frac_part = Rational::new(digits, scale);
            let int_part = Rational::from_int(int.abs());
            let v = int_part + frac_part;
            return Ok(if neg { -v } else { v });
        }
        let n: i128 = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_int(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

/// Shorthand constructor, `rat(13, 80)` is `13/80`.
pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("13/80".parse::<Rational>().unwrap(), rat(13, 80));
        assert_eq!("0.1625".parse::<Rational>().unwrap(), rat(13, 80));
        assert_eq!("1".parse::<Rational>().unwrap(), Rational::ONE);
        assert_eq!("-0.5".parse::<Rational>().unwrap(), rat(-1, 2));
        assert_eq!(".25".parse::<Rational>().unwrap(), rat(1, 4));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_formatting_rounds_to_nearest() {
        assert_eq!(rat(13, 80).to_decimal_string(4), "0.1625");
        assert_eq!(rat(1, 3).to_decimal_string(6), "0.333333");
        assert_eq!(rat(2, 3).to_decimal_string(6), "0.666667");
        assert_eq!(rat(-1, 2).to_decimal_string(1), "-0.5");
        assert_eq!(Rational::ZERO.to_decimal_string(3), "0.000");
    }

    #[test]
    fn arithmetic_stays_reduced() {
        let v = rat(1, 4) + rat(1, 4);
        assert_eq!(v.numer(), 1);
        assert_eq!(v.denom(), 2);
    }
}
