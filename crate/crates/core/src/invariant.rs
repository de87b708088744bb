//! Heat-trace invariants as exact linear combinations of differential
//! monomials `∫ ∏_k ∂^{α_k} V dx`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bridge::CoefficientEngine;
use crate::error::{Error, Result};
use crate::multi_index::{enumerate_index_tuples, IndexTuple, MultiIndex};
use crate::rational::{display, RationalRepr};
use crate::scalar::Coeff;
use crate::Rational;

/// The integrand `∏_k ∂^{α_k} V`, with factors kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiffMonomial(Vec<MultiIndex>);

impl DiffMonomial {
    pub fn new(mut factors: Vec<MultiIndex>) -> Self {
        assert!(!factors.is_empty(), "monomials have at least one factor");
        factors.sort();
        DiffMonomial(factors)
    }

    pub fn from_tuple(alpha: &IndexTuple) -> Self {
        Self::new(alpha.entries().to_vec())
    }

    /// `V^degree` with no derivatives.
    pub fn power(n: usize, degree: usize) -> Self {
        DiffMonomial(vec![MultiIndex::zero(n); degree])
    }

    pub fn factors(&self) -> &[MultiIndex] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0[0].dim()
    }

    pub fn total_order(&self) -> u32 {
        self.0.iter().map(MultiIndex::order).sum()
    }

    pub fn max_order(&self) -> u32 {
        self.0.iter().map(MultiIndex::order).max().unwrap_or(0)
    }

    /// Factor orders sorted descending.
    pub fn order_profile(&self) -> Vec<u32> {
        let mut o: Vec<u32> = self.0.iter().map(MultiIndex::order).collect();
        o.sort_unstable_by(|a, b| b.cmp(a));
        o
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|a| {
                if a.is_zero() {
                    "V".to_string()
                } else {
                    let mut s = String::from("d");
                    for (c, &e) in a.exponents().iter().enumerate() {
                        for _ in 0..e {
                            s.push_str(&(c + 1).to_string());
                        }
                    }
                    s.push('V');
                    s
                }
            })
            .collect();
        write!(f, "[{}]", parts.join("*"))
    }
}

/// `(4π)^{-n/2} Σ coeff · ∫ monomial`, labelled with its expansion order.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression<T> {
    dim: usize,
    order: u32,
    terms: BTreeMap<DiffMonomial, T>,
}

impl<T: Coeff> Expression<T> {
    pub fn zero(dim: usize, order: u32) -> Self {
        Expression { dim, order, terms: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Exponent `p` of the overall `(4π)^{-p/2}` factor; always the dimension.
    pub fn normalization_power(&self) -> u32 {
        self.dim as u32
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &DiffMonomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, m: DiffMonomial, c: T) {
        assert_eq!(m.dim(), self.dim, "monomial dimension differs from expression");
        if c.is_zero() {
            return;
        }
        let sum = self.coeff(&m) + c;
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &Expression<T>) -> Expression<T> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &T) -> Expression<T> {
        let mut out = Expression::zero(self.dim, self.order);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self
    }

    pub fn highest_single_axis_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().flat_map(|a| a.exponents().iter().copied()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for Expression<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("{}*{}", display(c), m)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_{|α^j| = total} c_{α^j} · ∫ ∏_k ∂^{α_k} V`, unsigned.
pub fn tuple_sum(engine: &CoefficientEngine, j: usize, n: usize, total: u32) -> Result<Expression<Rational>> {
    engine.check_budget(j, total)?;
    let mut expr = Expression::zero(n, total + 2 * j as u32);
    for alpha in enumerate_index_tuples(j, n, total) {
        let c = engine.coefficient(&alpha)?;
        expr.add_term(DiffMonomial::from_tuple(&alpha), c.value);
    }
    Ok(expr)
}

/// `𝒫_m = Σ_{1 ≤ j ≤ m/2} (-1)^j Σ_{|α^j| = m - 2j} c_{α^j} P_{α^j}`.
pub fn assemble_invariant_with(engine: &CoefficientEngine, order: u32, n: usize) -> Result<Expression<Rational>> {
    if order < 2 {
        return Err(Error::OrderTooSmall(order));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let mut expr = Expression::zero(n, order);
    if order % 2 == 1 {
        return Ok(expr);
    }
    for j in 1..=(order / 2) as usize {
        let part = tuple_sum(engine, j, n, order - 2 * j as u32)?;
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        expr = expr.add(&part.scale(&sign));
    }
    Ok(expr)
}

pub fn assemble_invariant(order: u32, n: usize) -> Result<Expression<Rational>> {
    assemble_invariant_with(&CoefficientEngine::default(), order, n)
}

/// JSON form of an expression: monomials as arrays of exponent vectors,
/// coefficients as `{num, den}` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressionExport {
    pub order: u32,
    pub dimension: usize,
    pub normalization_power: u32,
    pub terms: Vec<TermExport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermExport {
    pub factors: Vec<Vec<u32>>,
    pub coefficient: RationalRepr,
}

impl From<&Expression<Rational>> for ExpressionExport {
    fn from(e: &Expression<Rational>) -> Self {
        ExpressionExport {
            order: e.order,
            dimension: e.dim,
            normalization_power: e.normalization_power(),
            terms: e
                .terms
                .iter()
                .map(|(m, c)| TermExport {
                    factors: m.factors().iter().map(|a| a.exponents().to_vec()).collect(),
                    coefficient: c.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ExpressionExport> for Expression<Rational> {
    type Error = Error;

    fn try_from(x: &ExpressionExport) -> Result<Self> {
        let mut e = Expression::zero(x.dimension, x.order);
        for t in &x.terms {
            if t.factors.is_empty() {
                return Err(Error::EmptyTuple);
            }
            let factors: Vec<MultiIndex> = t.factors.iter().map(|f| MultiIndex::new(f.clone())).collect();
            if let Some(bad) = factors.iter().find(|f| f.dim() != x.dimension) {
                return Err(Error::DimensionMismatch { expected: x.dimension, found: bad.dim() });
            }
            e.add_term(DiffMonomial::new(factors), Rational::try_from(&t.coefficient)?);
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn second_order_is_minus_integral() {
        for n in 1..=3 {
            let p2 = assemble_invariant(2, n).unwrap();
            assert_eq!(p2.len(), 1);
            assert_eq!(p2.coeff(&DiffMonomial::power(n, 1)), int(-1));
            assert_eq!(p2.normalization_power(), n as u32);
        }
    }

    #[test]
    fn odd_orders_vanish() {
        for l in 1..=4 {
            for n in 1..=3 {
                assert!(assemble_invariant(2 * l + 1, n).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn fourth_order_has_half_square() {
        let p4 = assemble_invariant(4, 2).unwrap();
        assert_eq!(p4.coeff(&DiffMonomial::power(2, 2)), ratio(1, 2));
    }

    #[test]
    fn order_below_two_is_rejected() {
        assert_eq!(assemble_invariant(1, 1), Err(Error::OrderTooSmall(1)));
    }

    #[test]
    fn capacity_error_names_offending_j() {
        let engine = CoefficientEngine::new(8);
        // order 10 needs |α^1| + 2 = 10 > 8 at j = 1
        match assemble_invariant_with(&engine, 10, 1) {
            Err(Error::CapacityExceeded { j, .. }) => assert_eq!(j, 1),
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    #[test]
    fn export_round_trips() {
        let p6 = assemble_invariant(6, 2).unwrap();
        let x = ExpressionExport::from(&p6);
        assert_eq!(Expression::try_from(&x).unwrap(), p6);
        let json = serde_json::to_string(&x).unwrap();
        let back: ExpressionExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn monomials_are_sorted() {
        let a = MultiIndex::new(vec![2]);
        let b = MultiIndex::new(vec![0]);
        assert_eq!(DiffMonomial::new(vec![a.clone(), b.clone()]), DiffMonomial::new(vec![b, a]));
    }

    #[test]
    fn display_names_derivatives() {
        let m = DiffMonomial::new(vec![MultiIndex::new(vec![1, 1]), MultiIndex::new(vec![0, 0])]);
        assert_eq!(m.to_string(), "[V*d12V]");
    }
}
