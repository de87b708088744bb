#![allow(dead_code)]

use heatrace_core::potential::Potential;
use heatrace_core::PotentialSpec;
use heatrace_spectral::{discretize_with, CoefficientField, DomainSpec, Eigenvectors, SpectralModel};

/// `∫_{-1}^{1} exp(-1/(1-x²)) dx`, adaptive quadrature to 1e-15.
pub const BUMP_MASS: f64 = 0.443_993_816_168_079_3;

pub fn model(domain: &DomainSpec, spec: &PotentialSpec, vectors: Eigenvectors) -> SpectralModel {
    let v = spec.sample(&domain.grid::<f64>().unwrap(), domain.margin).unwrap();
    discretize_with(domain, &CoefficientField::identity(), &v, vectors).unwrap()
}

pub fn model_with_values(domain: &DomainSpec, values: Vec<f64>, vectors: Eigenvectors) -> SpectralModel {
    let v = Potential::new(domain.grid::<f64>().unwrap(), values, domain.margin).unwrap();
    discretize_with(domain, &CoefficientField::identity(), &v, vectors).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
