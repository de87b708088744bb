//! Gaussian chain integrals evaluated as centered moments of a bridge process.
//!
//! With the free heat kernel `G(t, w) = (4πt)^{-n/2} e^{-|w|²/4t}`, the chain
//! `G(1-s_1, w_1) ∏_k G(s_k - s_{k+1}, w_k - w_{k+1})` (`s_{j+1} = w_{j+1} = 0`)
//! is `(4π)^{-n/2}` times the joint density of a Brownian bridge pinned at 0 at
//! times 0 and 1, with variance rate 2, observed at `s_1 > … > s_j`. Each
//! coordinate is an independent centered Gaussian vector with covariance
//!
//! ```text
//! Cov(w_i, w_k) = 2 (1 - s_i) s_k,   i ≤ k  (so s_i ≥ s_k)
//! ```
//!
//! so every polynomial moment follows from Isserlis' theorem.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multi_index::IndexTuple;
use crate::poly::Poly;
use crate::rational::RationalRepr;
use crate::scalar::Coeff;
use crate::Rational;

/// Default cap on `|α^j| + 2j` for coefficient evaluation.
pub const DEFAULT_BUDGET: u32 = 16;

/// Covariance of the bridge at the ordered times `s_1 > … > s_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BridgeCovariance {
    arity: usize,
}

impl BridgeCovariance {
    pub fn new(arity: usize) -> Self {
        BridgeCovariance { arity }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// `2 (1 - s_min(i,k)) s_max(i,k)` with zero-based slot indices.
    pub fn entry<T: Coeff>(&self, i: usize, k: usize) -> Poly<T> {
        let (early, late) = if i <= k { (i, k) } else { (k, i) };
        let j = self.arity;
        let s_late = Poly::var(j, late);
        let one_minus = &Poly::one(j) - &Poly::var(j, early);
        (&one_minus * &s_late).scale(&T::from_u64_exact(2))
    }
}

/// `E[∏_k w_k^{γ_k}]` for the bridge, as a polynomial in `s_1, …, s_j`.
///
/// Pairs the first slot with remaining exponent against every slot
/// (itself included) recursively; repeated slots contribute their
/// multiplicity as the pairing weight.
pub fn wick_moment<T: Coeff>(exponents: &[u32]) -> Poly<T> {
    assert!(!exponents.is_empty(), "moments need at least one slot");
    let j = exponents.len();
    if exponents.iter().sum::<u32>() % 2 == 1 {
        return Poly::zero(j);
    }
    let cov = BridgeCovariance::new(j);
    let entries: Vec<Vec<Poly<T>>> =
        (0..j).map(|i| (0..j).map(|k| cov.entry(i, k)).collect()).collect();
    let mut memo = HashMap::new();
    isserlis(&mut exponents.to_vec(), &entries, &mut memo)
}

fn isserlis<T: Coeff>(
    gamma: &mut Vec<u32>,
    cov: &[Vec<Poly<T>>],
    memo: &mut HashMap<Vec<u32>, Poly<T>>,
) -> Poly<T> {
    let j = gamma.len();
    let Some(first) = gamma.iter().position(|&g| g > 0) else {
        return Poly::one(j);
    };
    if let Some(hit) = memo.get(gamma.as_slice()) {
        return hit.clone();
    }
    let mut total = Poly::zero(j);
    let g = gamma[first];
    if g >= 2 {
        gamma[first] -= 2;
        let rest = isserlis(gamma, cov, memo);
        gamma[first] += 2;
        let w = T::from_u64_exact(u64::from(g - 1));
        total = &total + &(&cov[first][first] * &rest).scale(&w);
    }
    for other in first + 1..j {
        let m = gamma[other];
        if m == 0 {
            continue;
        }
        gamma[first] -= 1;
        gamma[other] -= 1;
        let rest = isserlis(gamma, cov, memo);
        gamma[first] += 1;
        gamma[other] += 1;
        let w = T::from_u64_exact(u64::from(m));
        total = &total + &(&cov[first][other] * &rest).scale(&w);
    }
    memo.insert(gamma.clone(), total.clone());
    total
}

/// A value standing for `value · (4π)^{-power/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized<T> {
    pub value: T,
    pub power: u32,
}

impl Serialize for Normalized<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("NormalizedCoefficient", 2)?;
        st.serialize_field("value", &RationalRepr::from(&self.value))?;
        st.serialize_field("power", &self.power)?;
        st.end()
    }
}

/// True iff some coordinate has an odd exponent sum across the entries, in
/// which case the coefficient vanishes by `w ↦ -w` symmetry of that coordinate.
pub fn parity_vanishes(alpha: &IndexTuple) -> bool {
    (0..alpha.dim()).any(|c| alpha.coordinate(c).iter().sum::<u32>() % 2 == 1)
}

/// The entry-reversed tuple; its coefficient equals the original's.
pub fn mirror(alpha: &IndexTuple) -> IndexTuple {
    alpha.reversed()
}

/// Evaluates `c_{α^j}` with a size budget and a shared moment cache.
///
/// The cache is behind an `RwLock`, so one engine may serve concurrent
/// callers; it can be disabled with [`CoefficientEngine::without_cache`].
pub struct CoefficientEngine {
    budget: u32,
    cache: Option<RwLock<HashMap<Vec<u32>, Poly<Rational>>>>,
}

impl Default for CoefficientEngine {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

impl CoefficientEngine {
    pub fn new(budget: u32) -> Self {
        CoefficientEngine { budget, cache: Some(RwLock::new(HashMap::new())) }
    }

    pub fn without_cache(budget: u32) -> Self {
        CoefficientEngine { budget, cache: None }
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    /// Fails with [`Error::CapacityExceeded`] when `|α^j| + 2j` exceeds the budget.
    pub fn check_budget(&self, j: usize, order: u32) -> Result<()> {
        let weight = order + 2 * j as u32;
        if weight > self.budget {
            Err(Error::CapacityExceeded { j, weight, budget: self.budget })
        } else {
            Ok(())
        }
    }

    fn moment(&self, gamma: Vec<u32>) -> Poly<Rational> {
        let Some(cache) = &self.cache else {
            return wick_moment(&gamma);
        };
        if let Some(hit) = cache.read().expect("moment cache poisoned").get(&gamma) {
            return hit.clone();
        }
        let p: Poly<Rational> = wick_moment(&gamma);
        cache.write().expect("moment cache poisoned").entry(gamma).or_insert(p).clone()
    }

    /// `c_{α^j} = (1/α^j!) ∫_simplex ∏_c E[∏_k w_k^{(α_k)_c}]`, power `n`.
    pub fn coefficient(&self, alpha: &IndexTuple) -> Result<Normalized<Rational>> {
        let j = alpha.len();
        let n = alpha.dim();
        self.check_budget(j, alpha.order())?;
        if parity_vanishes(alpha) {
            return Ok(Normalized { value: Rational::from_integer(0.into()), power: n as u32 });
        }
        let mut integrand = Poly::one(j);
        for c in 0..n {
            let gamma = alpha.coordinate(c);
            if gamma.iter().all(|&g| g == 0) {
                continue;
            }
            integrand = &integrand * &self.moment(gamma);
        }
        let integral = integrand.integrate_simplex()?;
        let value = integral / Rational::from_integer(BigInt::from(alpha.factorial()));
        Ok(Normalized { value, power: n as u32 })
    }
}

/// [`CoefficientEngine::coefficient`] with the default budget and no cache.
pub fn coefficient(alpha: &IndexTuple) -> Result<Normalized<Rational>> {
    CoefficientEngine::without_cache(DEFAULT_BUDGET).coefficient(alpha)
}
