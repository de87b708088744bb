//! Helpers around the exact rational type.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::Rational;

/// `num / den` as a normalized rational. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

/// `1 / k!` for small `k`.
pub fn inv_factorial(k: u32) -> Rational {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= i;
    }
    Rational::new(BigInt::one(), f)
}

pub fn to_real<T: Real>(q: &Rational) -> T {
    let v = q
        .to_f64()
        .unwrap_or_else(|| q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN));
    T::of(v)
}

/// Rational serialized as decimal strings, `{"num": "-13", "den": "360"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(q: &Rational) -> Self {
        RationalRepr {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalRepr> for Rational {
    type Error = Error;

    fn try_from(r: &RationalRepr) -> Result<Self> {
        let bad = || Error::MalformedRational(format!("{}/{}", r.num, r.den));
        let num: BigInt = r.num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = r.den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::new(num, den))
    }
}

/// Parses `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn display(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalized_on_construction() {
        let q = ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(ratio(0, 7), Rational::zero());
        assert_eq!(ratio(0, 7).denom(), &BigInt::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(checked_div(&int(1), &int(0)), Err(Error::DivisionByZero));
        assert_eq!(checked_div(&int(1), &int(4)), Ok(ratio(1, 4)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_rational(" -13/360 "), Some(ratio(-13, 360)));
        assert_eq!(parse_rational("5"), Some(int(5)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(display(&ratio(2, 4)), "1/2");
        assert_eq!(display(&int(-3)), "-3");
    }

    #[test]
    fn repr_rejects_zero_denominator() {
        let r = RationalRepr { num: "1".into(), den: "0".into() };
        assert!(Rational::try_from(&r).is_err());
        let q = ratio(-7, 120);
        assert_eq!(Rational::try_from(&RationalRepr::from(&q)).unwrap(), q);
    }

    #[test]
    fn inverse_factorials() {
        assert_eq!(inv_factorial(0), int(1));
        assert_eq!(inv_factorial(5), ratio(1, 120));
    }

    proptest! {
        #[test]
        fn add_then_subtract_round_trips(
            a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000
        ) {
            let x = ratio(a, b);
            let y = ratio(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x);
        }
    }
}
