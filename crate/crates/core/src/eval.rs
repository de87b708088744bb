//! Numerical evaluation of invariant expressions on sampled potentials.

use std::collections::HashMap;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::{assemble_invariant, Expression};
use crate::multi_index::{multi_indices_of_order, MultiIndex};
use crate::potential::{Boundary, Potential};
use crate::rational::to_real;
use crate::scalar::Real;
use crate::{ibp_canonicalize, Rational};

/// Largest single-axis derivative order supported by the finite-difference stencils.
pub const FD_MAX_ORDER: u32 = 8;
/// Largest single-axis derivative order taken spectrally.
pub const SPECTRAL_MAX_ORDER: u32 = 12;
/// Formal accuracy of the finite-difference stencils.
pub const FD_ACCURACY: usize = 4;

/// Centered finite-difference weights for the `order`-th derivative on the
/// offsets `-p..=p`, unit spacing.
pub fn centered_weights(order: u32) -> Vec<f64> {
    let p = (order as usize).div_ceil(2) + FD_ACCURACY / 2 - 1;
    let nodes: Vec<f64> = (-(p as i64)..=p as i64).map(|k| k as f64).collect();
    fornberg(&nodes, 0.0, order as usize)
}

/// Fornberg's recursion for interpolatory derivative weights at `x0`.
fn fornberg(x: &[f64], x0: f64, m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Memoized partial derivatives of one potential.
pub struct Differentiator<'a, T: Real> {
    v: &'a Potential<T>,
    cache: HashMap<MultiIndex, Vec<T>>,
    planner: FftPlanner<T>,
}

impl<'a, T: Real> Differentiator<'a, T> {
    pub fn new(v: &'a Potential<T>) -> Self {
        Differentiator { v, cache: HashMap::new(), planner: FftPlanner::new() }
    }

    pub fn max_order(&self) -> u32 {
        match self.v.grid().boundary() {
            Boundary::Periodic => SPECTRAL_MAX_ORDER,
            Boundary::Dirichlet => FD_MAX_ORDER,
        }
    }

    pub fn check(&self, alpha: &MultiIndex) -> Result<()> {
        if alpha.dim() != self.v.grid().dim() {
            return Err(Error::DimensionMismatch { expected: self.v.grid().dim(), found: alpha.dim() });
        }
        let max = self.max_order();
        match alpha.exponents().iter().find(|&&e| e > max) {
            Some(&order) => Err(Error::DerivativeOrder { order, max }),
            None => Ok(()),
        }
    }

    /// `∂^α V` at every node.
    pub fn get(&mut self, alpha: &MultiIndex) -> Result<&[T]> {
        self.check(alpha)?;
        if !self.cache.contains_key(alpha) {
            let mut values = self.v.values().to_vec();
            for (axis, &k) in alpha.exponents().iter().enumerate() {
                if k > 0 {
                    values = match self.v.grid().boundary() {
                        Boundary::Periodic => self.spectral(&values, axis, k),
                        Boundary::Dirichlet => self.finite_difference(&values, axis, k),
                    };
                }
            }
            self.cache.insert(alpha.clone(), values);
        }
        Ok(&self.cache[alpha])
    }

    fn lines(&self, axis: usize) -> (usize, usize, Vec<usize>) {
        let grid = self.v.grid();
        let n = grid.points()[axis];
        let stride = grid.stride(axis);
        let starts = (0..grid.len()).filter(|&f| (f / stride) % n == 0).collect();
        (n, stride, starts)
    }

    fn spectral(&mut self, values: &[T], axis: usize, k: u32) -> Vec<T> {
        let (n, stride, starts) = self.lines(axis);
        let fft = self.planner.plan_fft_forward(n);
        let ifft = self.planner.plan_fft_inverse(n);
        let length = self.v.grid().lengths()[axis];
        let base = T::two_pi() / length;
        let multipliers: Vec<Complex<T>> = (0..n)
            .map(|j| {
                let freq = if 2 * j < n { j as f64 } else { j as f64 - n as f64 };
                if 2 * j == n && k % 2 == 1 {
                    return Complex::new(T::zero(), T::zero());
                }
                let omega = Complex::new(T::zero(), base * T::of(freq));
                let mut m = Complex::new(T::one(), T::zero());
                for _ in 0..k {
                    m *= omega;
                }
                m / T::of_usize(n)
            })
            .collect();
        let mut out = vec![T::zero(); values.len()];
        let mut line = vec![Complex::new(T::zero(), T::zero()); n];
        for s in starts {
            for (i, c) in line.iter_mut().enumerate() {
                *c = Complex::new(values[s + i * stride], T::zero());
            }
            fft.process(&mut line);
            for (c, m) in line.iter_mut().zip(&multipliers) {
                *c *= *m;
            }
            ifft.process(&mut line);
            for (i, c) in line.iter().enumerate() {
                out[s + i * stride] = c.re;
            }
        }
        out
    }

    /// Values outside the grid are zero: the potential vanishes near the boundary.
    fn finite_difference(&self, values: &[T], axis: usize, k: u32) -> Vec<T> {
        let (n, stride, starts) = self.lines(axis);
        let h = self.v.grid().spacing(axis);
        let scale = T::one() / h.powi(k as i32);
        let weights: Vec<T> = centered_weights(k).into_iter().map(T::of).collect();
        let p = (weights.len() / 2) as isize;
        let mut out = vec![T::zero(); values.len()];
        for s in starts {
            for i in 0..n as isize {
                let mut acc = T::zero();
                for (w, off) in weights.iter().zip(-p..=p) {
                    let j = i + off;
                    if j >= 0 && j < n as isize {
                        acc += *w * values[s + j as usize * stride];
                    }
                }
                out[s + i as usize * stride] = acc * scale;
            }
        }
        out
    }

    /// Trapezoid integral of `∏ ∂^{α_k} V` over the grid.
    pub fn integrate_product(&mut self, factors: &[MultiIndex]) -> Result<T> {
        for a in factors {
            self.get(a)?;
        }
        let columns: Vec<&[T]> = factors.iter().map(|a| self.cache[a].as_slice()).collect();
        let mut sum = T::zero();
        for i in 0..self.v.grid().len() {
            sum += columns.iter().fold(T::one(), |acc, c| acc * c[i]);
        }
        Ok(sum * self.v.grid().cell_volume())
    }
}

/// `(4π)^{-p/2}`.
pub fn normalization<T: Real>(power: u32) -> T {
    (T::of(4.0) * T::pi()).powf(-T::of(power as f64 / 2.0))
}

/// `(4π)^{-n/2} Σ coeff · ∫ monomial`, coefficients converted at the last step.
pub fn evaluate_invariant<T: Real>(expr: &Expression<Rational>, v: &Potential<T>) -> Result<T> {
    if expr.dim() != v.grid().dim() {
        return Err(Error::DimensionMismatch { expected: v.grid().dim(), found: expr.dim() });
    }
    let mut d = Differentiator::new(v);
    for (m, _) in expr.terms() {
        for a in m.factors() {
            d.check(a)?;
        }
    }
    let mut total = T::zero();
    for (m, c) in expr.terms() {
        let integral = d.integrate_product(m.factors())?;
        total += to_real::<T>(c) * integral;
    }
    Ok(total * normalization::<T>(expr.normalization_power()))
}

/// Ingredients of the `H²`-control inequality for `V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H2Diagnostic<T> {
    /// `Σ_{|γ|=2} ∫ |∂^γ V|² + ∫ V⁴`
    pub lhs: T,
    /// `𝒫_8(V)`
    pub p8: T,
    /// `∫ |∇V|²`
    pub grad_energy: T,
    /// `max |V|`
    pub sup_norm: T,
}

pub fn h2_diagnostic<T: Real>(v: &Potential<T>) -> Result<H2Diagnostic<T>> {
    let p8 = ibp_canonicalize(&assemble_invariant(8, v.grid().dim())?);
    h2_diagnostic_with(&p8, v)
}

/// As [`h2_diagnostic`] with a precomputed `𝒫_8`.
pub fn h2_diagnostic_with<T: Real>(p8: &Expression<Rational>, v: &Potential<T>) -> Result<H2Diagnostic<T>> {
    if p8.order() != 8 {
        return Err(Error::Potential(format!("expected the order-8 invariant, got order {}", p8.order())));
    }
    let n = v.grid().dim();
    let mut d = Differentiator::new(v);
    let mut lhs = v.integrate(|x| x * x * x * x);
    for g in multi_indices_of_order(n, 2) {
        lhs += d.integrate_product(&[g.clone(), g])?;
    }
    let mut grad_energy = T::zero();
    for g in multi_indices_of_order(n, 1) {
        grad_energy += d.integrate_product(&[g.clone(), g])?;
    }
    Ok(H2Diagnostic { lhs, p8: evaluate_invariant(p8, v)?, grad_energy, sup_norm: v.sup_norm() })
}
