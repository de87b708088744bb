//! Duhamel terms `A_j(t)` of the perturbed heat trace in the eigenbasis of `A`.
//!
//! With `W = Φᵀ diag(V) Φ` and `z_m = -tλ_m`,
//!
//! ```text
//! A_j(t) = (-1)^j t^j Σ_{m_1..m_j} W_{m_1 m_2} ⋯ W_{m_j m_1} · exp[z_{m_1}, …, z_{m_j}, z_{m_1}]
//! ```
//!
//! where `exp[…]` is the divided difference of the exponential, i.e. the
//! integral of `e^{Σ s_i z_i}` over the time simplex.

use heatrace_core::Real;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::SpectralModel;
use crate::trace::{compensated_sum, heat_trace};

/// Default cutoff: modes with `e^{-tλ}` below this are dropped from the triple sum.
pub const CUTOFF_WEIGHT: f64 = 1e-14;
const SERIES_TERMS: usize = 40;

/// Divided difference of `exp` on the given nodes (any order, repeats allowed).
pub fn exp_divided_difference<T: Real>(nodes: &[T]) -> T {
    let mut z = nodes.to_vec();
    z.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    sorted_dd(&z)
}

fn sorted_dd<T: Real>(z: &[T]) -> T {
    let n = z.len();
    let span = z[n - 1] - z[0];
    if n == 1 {
        return z[0].exp();
    }
    if span < T::one() {
        return series_dd(z);
    }
    (sorted_dd(&z[1..]) - sorted_dd(&z[..n - 1])) / span
}

/// `e^c Σ_{k ≥ q} h_{k-q}(z - c) / k!` around the mean `c`, `q = #nodes - 1`,
/// with `h_m` the complete homogeneous symmetric polynomials.
fn series_dd<T: Real>(z: &[T]) -> T {
    let q = z.len() - 1;
    let c = z.iter().fold(T::zero(), |s, &x| s + x) / T::of_usize(z.len());
    let mut h = [T::zero(); SERIES_TERMS];
    h[0] = T::one();
    for &x in z {
        let d = x - c;
        for m in 1..SERIES_TERMS {
            let prev = h[m - 1];
            h[m] += d * prev;
        }
    }
    let mut inv_fact = T::one();
    for k in 1..=q {
        inv_fact /= T::of_usize(k);
    }
    let mut sum = T::zero();
    for (m, &hm) in h.iter().enumerate() {
        if m > 0 {
            inv_fact /= T::of_usize(q + m);
        }
        sum += hm * inv_fact;
    }
    c.exp() * sum
}

/// `Σ_{j ≥ from} x^j / j!`.
pub fn exp_tail(x: f64, from: u32) -> f64 {
    if x < 1.0 {
        let mut term = (1..=from).fold(1.0, |acc, k| acc * x / k as f64);
        let mut sum = 0.0;
        for k in from + 1..from + 60 {
            sum += term;
            term *= x / k as f64;
        }
        sum
    } else {
        let mut head = 0.0;
        let mut term = 1.0;
        for k in 0..from {
            head += term;
            term *= x / (k + 1) as f64;
        }
        x.exp() - head
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuhamelOptions {
    /// Eigenvalue cutoff for the triple sum. `None` starts from `e^{-tΛ} = 1e-14`
    /// and doubles `Λ` until the truncation bound meets the tolerance.
    #[serde(default)]
    pub cutoff: Option<f64>,
    /// Largest admissible truncation bound, relative to the a priori bound on `|A_3|`.
    #[serde(default = "default_truncation_tolerance")]
    pub truncation_tolerance: f64,
}

fn default_truncation_tolerance() -> f64 {
    1e-8
}

impl Default for DuhamelOptions {
    fn default() -> Self {
        DuhamelOptions { cutoff: None, truncation_tolerance: default_truncation_tolerance() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub cutoff: f64,
    pub modes: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DuhamelTerms {
    pub t: f64,
    /// `A_1, …, A_{j_max}`.
    pub terms: Vec<f64>,
    /// `(‖V‖_∞ t)^j / j! · Σ_m e^{-tλ_m}` for each `j`.
    pub bounds: Vec<f64>,
    /// `Σ_m e^{-tλ_m}`.
    pub free_trace: f64,
    pub sup_norm: f64,
    pub truncation: Option<Truncation>,
}

impl DuhamelTerms {
    /// `(e^x - Σ_{j ≤ j_max} x^j/j!) · Σ e^{-tλ_m}`, `x = ‖V‖_∞ t`: bounds the
    /// remainder of the series after the computed terms.
    pub fn tail_bound(&self) -> f64 {
        exp_tail(self.sup_norm * self.t, self.terms.len() as u32 + 1) * self.free_trace
    }

    pub fn partial_sum(&self) -> f64 {
        self.terms.iter().sum()
    }
}

/// Eigenbasis data shared by all `t`.
pub struct DuhamelOperator<'a, T: Real> {
    model: &'a SpectralModel<T>,
    w: DMatrix<T>,
}

impl<'a, T: Real> DuhamelOperator<'a, T> {
    pub fn new(model: &'a SpectralModel<T>) -> Result<Self> {
        let phi = model.eigenvectors().ok_or(SpectralError::MissingEigenvectors)?;
        let mut scaled = phi.clone();
        for (i, &v) in model.potential().values().iter().enumerate() {
            scaled.row_mut(i).scale_mut(v);
        }
        let w = phi.transpose() * scaled;
        Ok(DuhamelOperator { model, w })
    }

    /// `W = Φᵀ diag(V) Φ`.
    pub fn coupling(&self) -> &DMatrix<T> {
        &self.w
    }

    fn nodes(&self, t: T) -> Vec<T> {
        self.model.free_eigenvalues().iter().map(|&l| -t * l).collect()
    }

    pub fn first(&self, t: T) -> T {
        let z = self.nodes(t);
        -t * compensated_sum(z.iter().enumerate().map(|(m, &zm)| self.w[(m, m)] * zm.exp()))
    }

    pub fn second(&self, t: T) -> T {
        let z = self.nodes(t);
        let n = z.len();
        let rows: Vec<T> = (0..n)
            .into_par_iter()
            .map(|m| {
                compensated_sum((0..n).map(|p| {
                    let w = self.w[(m, p)];
                    w * w * exp_divided_difference(&[z[m], z[p], z[m]])
                }))
            })
            .collect();
        t * t * compensated_sum(rows)
    }

    pub fn kept_modes(&self, cutoff: T) -> usize {
        self.model.free_eigenvalues().iter().take_while(|&&l| l <= cutoff).count()
    }

    /// Triple sum over modes with `λ ≤ cutoff`, and a bound on the dropped part.
    pub fn third(&self, t: T, cutoff: T) -> (T, Truncation) {
        let z = self.nodes(t);
        let keep = self.kept_modes(cutoff);
        let rows: Vec<T> = (0..keep)
            .into_par_iter()
            .map(|a| {
                compensated_sum((0..keep).flat_map(|b| {
                    let wab = self.w[(a, b)];
                    let z = &z;
                    (0..keep).map(move |c| {
                        wab * self.w[(b, c)] * self.w[(c, a)] * exp_divided_difference(&[z[a], z[b], z[c], z[a]])
                    })
                }))
            })
            .collect();
        let value = -t * t * t * compensated_sum(rows);
        let truncation = Truncation { cutoff: cutoff.to_f64(), modes: keep, bound: self.third_truncation(t, keep) };
        (value, truncation)
    }

    /// `t³/2 · Σ_m e^{-tλ_m} (|W|³ - (P|W|P)³)_{mm}` with `P` the kept modes.
    ///
    /// Each dropped triple is bounded by `t³/6 |W W W| e^{-t min λ}`, and
    /// `e^{-t min λ}` by the sum over the triple; cyclic symmetry gives the 1/2.
    /// The difference of cubes is expanded as `D|W|² + B D |W| + B² D` with
    /// `B = P|W|P`, `D = |W| - B`, all entrywise nonnegative.
    fn third_truncation(&self, t: T, keep: usize) -> f64 {
        let n = self.w.nrows();
        if keep == n {
            return 0.0;
        }
        let abs = self.w.map(|x| x.magnitude());
        let mut b = abs.clone();
        for i in 0..n {
            for j in 0..n {
                if i >= keep || j >= keep {
                    b[(i, j)] = T::zero();
                }
            }
        }
        let d = &abs - &b;
        let abs2 = &abs * &abs;
        let bd = &b * &d;
        let b2 = &b * &b;
        let diag = |x: &DMatrix<T>, y: &DMatrix<T>, m: usize| -> T { x.row(m).transpose().dot(&y.column(m)) };
        let z = self.nodes(t);
        let total = compensated_sum((0..n).map(|m| {
            let weight = z[m].exp();
            weight * (diag(&d, &abs2, m) + diag(&bd, &abs, m) + diag(&b2, &d, m))
        }));
        (t * t * t * total).to_f64() / 2.0
    }
}

/// `A_1 … A_{j_max}` at time `t`, `j_max ≤ 3`.
pub fn duhamel_terms<T: Real>(
    model: &SpectralModel<T>,
    t: f64,
    j_max: usize,
    options: &DuhamelOptions,
) -> Result<DuhamelTerms> {
    if !(1..=3).contains(&j_max) {
        return Err(SpectralError::DuhamelOrder(j_max));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(SpectralError::TimeGrid(format!("time {t} must be positive")));
    }
    let op = DuhamelOperator::new(model)?;
    duhamel_terms_with(&op, t, j_max, options)
}

/// As [`duhamel_terms`], reusing the coupling matrix.
pub fn duhamel_terms_with<T: Real>(
    op: &DuhamelOperator<'_, T>,
    t: f64,
    j_max: usize,
    options: &DuhamelOptions,
) -> Result<DuhamelTerms> {
    if !(1..=3).contains(&j_max) {
        return Err(SpectralError::DuhamelOrder(j_max));
    }
    let model = op.model;
    let tt = T::of(t);
    let free_trace = heat_trace(model.free_eigenvalues(), tt).to_f64();
    let sup_norm = model.potential().sup_norm().to_f64();
    let mut terms = vec![op.first(tt).to_f64()];
    if j_max >= 2 {
        terms.push(op.second(tt).to_f64());
    }
    let mut truncation = None;
    if j_max >= 3 {
        let a_priori = (sup_norm * t).powi(3) / 6.0 * free_trace;
        let tolerance = options.truncation_tolerance * a_priori;
        let top = model.free_eigenvalues().last().map_or(0.0, |l| l.to_f64());
        let mut cutoff = options.cutoff.unwrap_or(-CUTOFF_WEIGHT.ln() / t);
        let (value, trunc) = loop {
            let keep = op.kept_modes(T::of(cutoff));
            let bound = op.third_truncation(tt, keep);
            if bound <= tolerance {
                break op.third(tt, T::of(cutoff));
            }
            if options.cutoff.is_some() || cutoff > top {
                return Err(SpectralError::CutoffTooAggressive { bound, tolerance });
            }
            cutoff *= 2.0;
        };
        terms.push(value.to_f64());
        truncation = Some(trunc);
    }
    let mut bounds = Vec::with_capacity(j_max);
    let mut factor = 1.0;
    for j in 1..=j_max {
        factor *= sup_norm * t / j as f64;
        bounds.push(factor * free_trace);
    }
    Ok(DuhamelTerms { t, terms, bounds, free_trace, sup_norm, truncation })
}
