use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::factor::factorizer;
use crate::arith::SquareClassQ;
use crate::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let d: BigInt = denom.into();
        if d.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numer.into(), d)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
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

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        Ok(ExactRational(self.0.recip()))
    }

    pub fn pow(&self, e: i32) -> Self {
        ExactRational(num_traits::pow::Pow::pow(&self.0, e))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// `v_p(x) = v_p(numerator) - v_p(denominator)`.
    pub fn valuation(&self, p: u64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        if !factorizer().is_prime_u64(p) {
            return Err(Error::NotPrime(p as i64));
        }
        Ok(int_valuation(self.numer(), p) as i64 - int_valuation(self.denom(), p) as i64)
    }

    /// The squarefree integer `s` with `x = s * (rational square)`.
    pub fn squarefree_part(&self) -> Result<SquareClassQ> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let n = SquareClassQ::of_integer(self.numer())?;
        let d = SquareClassQ::of_integer(self.denom())?;
        Ok(n.mul(&d))
    }

    /// True iff the value is the square of a rational number.
    pub fn is_square(&self) -> bool {
        if self.is_negative() {
            return false;
        }
        if self.is_zero() {
            return true;
        }
        is_perfect_square(self.numer()) && is_perfect_square(self.denom())
    }
}

pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return 0;
    }
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigInt> for ExactRational {
    fn from(n: BigInt) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `a`, `a/b`, and decimal/scientific forms such as `1e9` or `2.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse rational {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            return ExactRational::new(a, b);
        }
        if let Ok(n) = s.parse::<BigInt>() {
            return Ok(Self::from_integer(n));
        }
        // decimal with optional exponent, parsed exactly
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let scale = exp - frac_part.len() as i32;
        let ten = ExactRational::from_integer(10);
        Ok(ExactRational::from_integer(n) * ten.pow(scale))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($tr::$m(&self.0, &rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Zero for ExactRational {
    fn zero() -> Self {
        ExactRational::zero()
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for ExactRational {
    fn one() -> Self {
        ExactRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = ExactRational::new(6, -4).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(ExactRational::new(0, -7).unwrap(), ExactRational::zero());
        assert_eq!(ExactRational::zero().denom(), &BigInt::from(1));
        assert!(ExactRational::new(1, 0).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(q("12").valuation(2).unwrap(), 2);
        assert_eq!(q("1").valuation(7).unwrap(), 0);
        assert_eq!(q("9/16").valuation(2).unwrap(), -4);
        assert_eq!(q("9/16").valuation(3).unwrap(), 2);
        assert_eq!(q("0").valuation(2), Err(Error::ZeroValuation));
        assert!(q("5").valuation(9).is_err());
    }

    #[test]
    fn squarefree_parts() {
        assert_eq!(q("18").squarefree_part().unwrap().to_i64(), Some(2));
        assert_eq!(q("-4/9").squarefree_part().unwrap().to_i64(), Some(-1));
        // 50/27 = 2*5^2 / 3^3 = 6 * (5/9)^2
        assert_eq!(q("50/27").squarefree_part().unwrap().to_i64(), Some(6));
        assert!(q("0").squarefree_part().is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(q("1e9"), ExactRational::from_integer(1_000_000_000));
        assert_eq!(q("2.5"), ExactRational::new(5, 2).unwrap());
        assert_eq!(q(" -3/6 "), ExactRational::new(-1, 2).unwrap());
        assert!("abc".parse::<ExactRational>().is_err());
        assert_eq!(q("11/16").to_string(), "11/16");
    }

    #[test]
    fn squares() {
        assert!(q("9/16").is_square());
        assert!(!q("-9/16").is_square());
        assert!(!q("8").is_square());
    }
}
