//! Heat-trace differences `z(t) = tr e^{-tA_V} - tr e^{-tA}`.

use heatrace_core::Real;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::model::SpectralModel;

/// Samples `(t, z)` with strictly increasing, positive `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    samples: Vec<(f64, f64)>,
}

impl TraceSeries {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        check_times(&samples.iter().map(|s| s.0).collect::<Vec<_>>())?;
        if samples.iter().any(|s| !s.1.is_finite()) {
            return Err(SpectralError::TimeGrid("trace values must be finite".into()));
        }
        Ok(TraceSeries { samples })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples with `lo ≤ t ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> TraceSeries {
        TraceSeries { samples: self.samples.iter().copied().filter(|s| s.0 >= lo && s.0 <= hi).collect() }
    }
}

pub fn check_times(t: &[f64]) -> Result<()> {
    if t.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(SpectralError::TimeGrid("times must be positive and finite".into()));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(SpectralError::TimeGrid("times must be strictly increasing".into()));
    }
    Ok(())
}

/// `count` log-spaced times from `lo` to `hi` inclusive.
pub fn log_times(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(lo > 0.0) || !(hi > lo) {
        return Err(SpectralError::TimeGrid(format!("cannot log-space {count} points on [{lo}, {hi}]")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|k| {
            if k == 0 {
                lo
            } else if k + 1 == count {
                hi
            } else {
                (a + (b - a) * k as f64 / (count - 1) as f64).exp()
            }
        })
        .collect())
}

/// Neumaier-compensated sum in the given order.
pub(crate) fn compensated_sum<T: Real>(terms: impl IntoIterator<Item = T>) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for x in terms {
        let s = sum + x;
        if sum.magnitude() >= x.magnitude() {
            carry += (sum - s) + x;
        } else {
            carry += (x - s) + sum;
        }
        sum = s;
    }
    sum + carry
}

/// `Σ_k e^{-tλ_k}`.
pub fn heat_trace<T: Real>(eigenvalues: &[T], t: T) -> T {
    compensated_sum(eigenvalues.iter().map(|&l| (-t * l).exp()))
}

/// `z(t)` at one time, pairing eigenvalues in ascending order:
/// `e^{-tλ^V_k} - e^{-tλ_k} = e^{-tλ_k} · expm1(-t(λ^V_k - λ_k))`.
pub fn trace_difference<T: Real>(model: &SpectralModel<T>, t: T) -> T {
    let free = model.free_eigenvalues();
    let pert = model.perturbed_eigenvalues();
    compensated_sum(free.iter().zip(pert).map(|(&l, &lv)| (-t * l).exp() * (-t * (lv - l)).exp_m1()))
}

pub fn trace_diff<T: Real>(model: &SpectralModel<T>, t_grid: &[f64]) -> Result<TraceSeries> {
    check_times(t_grid)?;
    let samples = t_grid
        .par_iter()
        .map(|&t| (t, trace_difference(model, T::of(t)).to_f64()))
        .collect();
    TraceSeries::new(samples)
}
