//! Sparse polynomials in the ordered simplex variables `s_1, …, s_j`.
//!
//! Variable `i` (zero based) stands for `s_{i+1}`. Integration is over the
//! ordered simplex `0 < s_j < … < s_1 < 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Polynomial with exact (or floating) coefficients over `arity` variables.
///
/// Terms are keyed by exponent vectors of length `arity`; zero coefficients
/// are never stored.
#[derive(Clone, PartialEq)]
pub struct Poly<T> {
    arity: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Coeff> Poly<T> {
    pub fn zero(arity: usize) -> Self {
        Poly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: T) -> Self {
        Self::monomial(arity, vec![0; arity], c)
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, T::one())
    }

    /// The variable `s_{index+1}`.
    pub fn var(arity: usize, index: usize) -> Self {
        assert!(index < arity, "variable {index} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[index] = 1;
        Self::monomial(arity, e, T::one())
    }

    pub fn monomial(arity: usize, exponents: Vec<u32>, c: T) -> Self {
        assert_eq!(exponents.len(), arity);
        let mut p = Self::zero(arity);
        p.add_term(exponents, c);
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &T)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exponents: &[u32]) -> T {
        self.terms.get(exponents).cloned().unwrap_or_else(T::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exponents: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exponents) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.arity), |acc, _| &acc * self)
    }

    pub fn map_coeffs<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        let mut p = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.arity);
        self.terms.iter().fold(T::zero(), |acc, (e, c)| {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m = m * x.clone();
                }
            }
            acc + m
        })
    }

    /// Replaces variable `i` by `images[i]`; the result has the images' arity.
    pub fn substitute(&self, images: &[Poly<T>]) -> Result<Poly<T>> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: images.len() });
        }
        let target = images.first().map_or(0, Poly::arity);
        if let Some(bad) = images.iter().find(|p| p.arity != target) {
            return Err(Error::ArityMismatch { left: target, right: bad.arity });
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Exact value of `∫_0^1 ∫_0^{s_1} … ∫_0^{s_{j-1}} p ds_j … ds_1`.
    ///
    /// The innermost variable is integrated first with the monomial rule, then
    /// the next one out, and so on until `s_1` is integrated up to 1.
    pub fn integrate_simplex(&self) -> Result<T> {
        if self.arity == 0 {
            return Err(Error::EmptySimplex);
        }
        let mut current: BTreeMap<Vec<u32>, T> = self.terms.clone();
        for var in (0..self.arity).rev() {
            let mut next: BTreeMap<Vec<u32>, T> = BTreeMap::new();
            for (mut e, c) in current {
                let k = e.pop().expect("exponent vector shorter than arity");
                debug_assert_eq!(e.len(), var);
                let c = c / T::from_u64_exact(u64::from(k) + 1);
                if let Some(outer) = e.last_mut() {
                    *outer += k + 1;
                }
                let slot = next.entry(e).or_insert_with(T::zero);
                *slot = slot.clone() + c;
            }
            current = next;
        }
        Ok(current.into_values().fold(T::zero(), |a, b| a + b))
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;

    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.arity, rhs.arity, "adding polynomials of different arity");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;

    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Coeff> Neg for &Poly<T> {
    type Output = Poly<T>;

    fn neg(self) -> Poly<T> {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;

    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.arity, rhs.arity, "multiplying polynomials of different arity");
        let mut out = Poly::zero(self.arity);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Coeff> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Coeff> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Coeff> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Coeff + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*s{}", i + 1)?,
                    _ => write!(f, "*s{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poly").field("arity", &self.arity).field("terms", &self.terms).finish()
    }
}
