//! Closed forms for the one-dimensional two-time integrals
//!
//! ```text
//! I_{α,β}(s_1, s_2) = ∫∫ x^α y^β g(1-s_1, x) g(s_1-s_2, x-y) g(s_2, y) dx dy
//! ```
//!
//! built from explicit recurrences in `(α, β)`. This module does not use the
//! bridge covariance; it is an independent route to the same polynomials and
//! serves as the oracle for [`crate::bridge`]. Polynomials are stored with the
//! `(4π)^{-1/2}` factor removed.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::bridge::Normalized;
use crate::error::{Error, Result};
use crate::multi_index::{factorial, MultiIndex};
use crate::poly::Poly;
use crate::Rational;

type P = Poly<Rational>;

/// `I_{α,β}` as a polynomial in `(s_1, s_2)`, normalization power 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoParamIntegral {
    pub poly: P,
}

impl TwoParamIntegral {
    pub const NORMALIZATION_POWER: u32 = 1;
}

/// Which recurrence lowers `(α, β)` away from the base cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// `2(1-s_1)s_2 [2(α-1)(β-1)(s_1-s_2) I_{α-2,β-2} + (α+β-1) I_{α-1,β-1}]`
    CrossLowering,
    /// `2(1-s_1) [(α-1) s_1 I_{α-2,β} + β s_2 I_{α-1,β-1}]` (default)
    LeftLowering,
    /// `2(1-s_1) [(α+β-1) s_1 I_{α-2,β} - 2β(β-1) s_2 (s_1-s_2) I_{α-2,β-2}]`
    DoubleLeftLowering,
}

fn s1() -> P {
    P::var(2, 0)
}

fn s2() -> P {
    P::var(2, 1)
}

fn c(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `(2m)!/m! · s_1^m (1-s_1)^m`.
fn even_left(m: u32) -> P {
    let coef = Rational::from_integer(BigInt::from(factorial(2 * m) / factorial(m)));
    let base = &s1() * &(&P::one(2) - &s1());
    base.pow(m).scale(&coef)
}

/// `I_{0,2m}(s_1,s_2) = I_{2m,0}(1-s_2, 1-s_1)`.
fn even_right(m: u32) -> P {
    let one = P::one(2);
    even_left(m)
        .substitute(&[&one - &s2(), &one - &s1()])
        .expect("two images for a two-variable polynomial")
}

struct Reducer {
    rule: Reduction,
    memo: HashMap<(u32, u32), P>,
}

impl Reducer {
    fn get(&mut self, a: u32, b: u32) -> P {
        if (a + b) % 2 == 1 {
            return P::zero(2);
        }
        if let Some(p) = self.memo.get(&(a, b)) {
            return p.clone();
        }
        let p = if a == 0 {
            even_right(b / 2)
        } else if b == 0 {
            even_left(a / 2)
        } else if (a, b) == (1, 1) {
            (&(&P::one(2) - &s1()) * &s2()).scale(&c(2))
        } else {
            match self.rule {
                Reduction::CrossLowering => self.cross(a, b),
                Reduction::DoubleLeftLowering if a >= 2 => self.double_left(a, b),
                _ => self.left(a, b),
            }
        };
        self.memo.insert((a, b), p.clone());
        p
    }

    fn left(&mut self, a: u32, b: u32) -> P {
        let one_minus = &P::one(2) - &s1();
        let mut inner = P::zero(2);
        if a >= 2 {
            let t = &s1() * &self.get(a - 2, b);
            inner = &inner + &t.scale(&c(i64::from(a) - 1));
        }
        let t = &s2() * &self.get(a - 1, b - 1);
        inner = &inner + &t.scale(&c(i64::from(b)));
        (&one_minus * &inner).scale(&c(2))
    }

    fn cross(&mut self, a: u32, b: u32) -> P {
        let prefactor = (&(&P::one(2) - &s1()) * &s2()).scale(&c(2));
        let mut inner = self.get(a - 1, b - 1).scale(&c(i64::from(a + b) - 1));
        if a >= 2 && b >= 2 {
            let w = c(2 * (i64::from(a) - 1) * (i64::from(b) - 1));
            let t = &(&s1() - &s2()) * &self.get(a - 2, b - 2);
            inner = &inner + &t.scale(&w);
        }
        &prefactor * &inner
    }

    fn double_left(&mut self, a: u32, b: u32) -> P {
        let one_minus = &P::one(2) - &s1();
        let mut inner = (&s1() * &self.get(a - 2, b)).scale(&c(i64::from(a + b) - 1));
        if b >= 2 {
            let w = c(-2 * i64::from(b) * (i64::from(b) - 1));
            let t = &(&s2() * &(&s1() - &s2())) * &self.get(a - 2, b - 2);
            inner = &inner + &t.scale(&w);
        }
        (&one_minus * &inner).scale(&c(2))
    }
}

/// `I_{α,β}` via the default (left-lowering) recurrence.
pub fn i_closed(alpha: u32, beta: u32) -> TwoParamIntegral {
    i_closed_with(alpha, beta, Reduction::LeftLowering)
}

pub fn i_closed_with(alpha: u32, beta: u32, rule: Reduction) -> TwoParamIntegral {
    let mut r = Reducer { rule, memo: HashMap::new() };
    TwoParamIntegral { poly: r.get(alpha, beta) }
}

/// `𝓘(α, β) = ∫_0^1 ∫_0^{s_1} ∏_k I_{α_k,β_k}(s_1,s_2) ds_2 ds_1`, power `n`.
pub fn script_i(alpha: &MultiIndex, beta: &MultiIndex) -> Result<Normalized<Rational>> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: beta.dim() });
    }
    let mut integrand = P::one(2);
    for k in 0..alpha.dim() {
        integrand = &integrand * &i_closed(alpha.get(k), beta.get(k)).poly;
    }
    Ok(Normalized { value: integrand.integrate_simplex()?, power: alpha.dim() as u32 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn two_two_closed_form() {
        let one = P::one(2);
        let bracket = &(&s1() * &(&one - &s2())) + &(&(&one - &s1()) * &s2()).scale(&c(2));
        let want = (&(&(&one - &s1()) * &s2()) * &bracket).scale(&c(4));
        assert_eq!(i_closed(2, 2).poly, want);
    }

    #[test]
    fn three_one_closed_form() {
        let one_minus = &P::one(2) - &s1();
        let want = (&(&one_minus.pow(2) * &s1()) * &s2()).scale(&c(12));
        assert_eq!(i_closed(3, 1).poly, want);
    }

    #[test]
    fn odd_total_is_zero() {
        assert!(i_closed(1, 0).poly.is_zero());
        assert!(i_closed(2, 3).poly.is_zero());
    }

    #[test]
    fn four_zero_closed_form() {
        let b = &s1() * &(&P::one(2) - &s1());
        assert_eq!(i_closed(4, 0).poly, b.pow(2).scale(&c(12)));
    }

    #[test]
    fn left_lowering_at_alpha_one_needs_no_special_case() {
        // (α - 1) = 0 kills the I_{α-2,β} term; only the β term survives
        let direct = (&(&(&P::one(2) - &s1()) * &s2()) * &i_closed(0, 2).poly).scale(&c(6));
        assert_eq!(i_closed(1, 3).poly, direct);
    }

    #[test]
    fn alternate_reductions_agree() {
        for a in 0..=6 {
            for b in 0..=6 {
                let base = i_closed(a, b).poly;
                assert_eq!(i_closed_with(a, b, Reduction::CrossLowering).poly, base, "ii at {a},{b}");
                assert_eq!(i_closed_with(a, b, Reduction::DoubleLeftLowering).poly, base, "iv at {a},{b}");
            }
        }
    }

    #[test]
    fn script_i_values() {
        assert_eq!(script_i(&mi(&[2]), &mi(&[0])).unwrap().value, ratio(1, 6));
        assert_eq!(script_i(&mi(&[1]), &mi(&[1])).unwrap().value, ratio(1, 12));
        assert_eq!(script_i(&mi(&[4]), &mi(&[0])).unwrap().value, ratio(1, 5));
        assert!(script_i(&mi(&[1]), &mi(&[1, 0])).is_err());
    }

    #[test]
    fn script_i_is_transpose_symmetric() {
        let all: Vec<MultiIndex> = (0..=3)
            .flat_map(|a| (0..=3).map(move |b| mi(&[a, b])))
            .collect();
        for x in &all {
            for y in &all {
                assert_eq!(script_i(x, y).unwrap(), script_i(y, x).unwrap(), "{x} {y}");
            }
        }
    }
}
