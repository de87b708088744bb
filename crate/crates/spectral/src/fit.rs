//! Weighted least-squares fits of `z(t) · t^{n/2} ≈ Σ_k d_k t^k`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};
use crate::trace::TraceSeries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitOptions {
    /// Rows are weighted by `(t / t_max)^{-p}`; defaults to the smallest power.
    #[serde(default)]
    pub weight_exponent: Option<f64>,
    /// A warning is recorded above this condition number.
    #[serde(default = "default_condition_threshold")]
    pub condition_threshold: f64,
    /// Declared asymptotic window; samples outside it are rejected.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

fn default_condition_threshold() -> f64 {
    1e12
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { weight_exponent: None, condition_threshold: default_condition_threshold(), window: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub dimension: usize,
    pub powers: Vec<f64>,
    pub estimates: Vec<f64>,
    /// One-sigma errors from the residual variance; zero for square systems.
    pub std_errors: Vec<f64>,
    pub samples: usize,
    pub weight_exponent: f64,
    /// Weighted residual 2-norm.
    pub residual_norm: f64,
    /// Weighted residual norm over the weighted data norm.
    pub relative_residual: f64,
    /// Of the weighted design matrix after column equilibration.
    pub condition_number: f64,
    pub warnings: Vec<String>,
}

impl FitReport {
    pub fn estimate(&self, power: f64) -> Option<f64> {
        self.powers.iter().position(|&p| p == power).map(|i| self.estimates[i])
    }
}

pub fn fit_expansion(series: &TraceSeries, n: usize, powers: &[f64], options: &FitOptions) -> Result<FitReport> {
    let m = series.len();
    let p = powers.len();
    if p == 0 {
        return Err(SpectralError::DegenerateFit("no powers requested".into()));
    }
    if m < p {
        return Err(SpectralError::Underdetermined { samples: m, powers: p });
    }
    if powers.iter().any(|x| !x.is_finite()) {
        return Err(SpectralError::DegenerateFit("powers must be finite".into()));
    }
    let mut sorted = powers.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite powers"));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(SpectralError::DegenerateFit("repeated power".into()));
    }
    if let Some((lo, hi)) = options.window {
        if series.samples().iter().any(|s| s.0 < lo || s.0 > hi) {
            return Err(SpectralError::TimeGrid(format!("samples outside the asymptotic window [{lo}, {hi}]")));
        }
    }

    let t = series.times();
    let z = series.values();
    let t_max = t[m - 1];
    let exponent = options.weight_exponent.unwrap_or(sorted[0]);
    let weights: Vec<f64> = t.iter().map(|&ti| (ti / t_max).powf(-exponent)).collect();
    let w_max = weights.iter().cloned().fold(0.0, f64::max);
    let half = n as f64 / 2.0;

    let mut x = DMatrix::from_fn(m, p, |i, k| weights[i] / w_max * (t[i] / t_max).powf(powers[k]));
    let y = DVector::from_fn(m, |i, _| weights[i] / w_max * z[i] * t[i].powf(half));
    let norms: Vec<f64> = (0..p).map(|k| x.column(k).norm()).collect();
    if norms.iter().any(|&c| !(c > 0.0) || !c.is_finite()) {
        return Err(SpectralError::DegenerateFit("design column vanishes or overflows".into()));
    }
    for (k, &c) in norms.iter().enumerate() {
        x.column_mut(k).unscale_mut(c);
    }

    let svd = x.clone().svd(true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    if !(s_min > s_max * 1e-15) {
        return Err(SpectralError::DegenerateFit("design matrix is rank deficient (degenerate t grid)".into()));
    }
    let condition_number = s_max / s_min;
    let b = svd.solve(&y, 0.0).map_err(|e| SpectralError::DegenerateFit(e.to_string()))?;
    let r = &y - &x * &b;
    let residual_norm = r.norm();
    let relative_residual = if y.norm() > 0.0 { residual_norm / y.norm() } else { residual_norm };

    let dof = m - p;
    let sigma2 = if dof > 0 { residual_norm * residual_norm / dof as f64 } else { 0.0 };
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let scale = |k: usize| norms[k] * t_max.powf(powers[k]);
    let estimates: Vec<f64> = (0..p).map(|k| b[k] / scale(k)).collect();
    let std_errors: Vec<f64> = (0..p)
        .map(|k| {
            let var: f64 = (0..p).map(|s| (v_t[(s, k)] / sv[s]).powi(2)).sum::<f64>() * sigma2;
            var.sqrt() / scale(k)
        })
        .collect();

    let mut warnings = Vec::new();
    if condition_number > options.condition_threshold {
        warnings.push(format!(
            "condition number {condition_number:e} exceeds threshold {:e}",
            options.condition_threshold
        ));
    }
    Ok(FitReport {
        dimension: n,
        powers: powers.to_vec(),
        estimates,
        std_errors,
        samples: m,
        weight_exponent: exponent,
        residual_norm,
        relative_residual,
        condition_number,
        warnings,
    })
}
