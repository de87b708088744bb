//! Boxes, tori and isotropic coefficient fields.

use heatrace_core::potential::MIN_POINTS;
use heatrace_core::{Boundary, Grid, Real};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectralError};

/// An interval/rectangle with Dirichlet conditions or a circle/2-torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub boundary: Boundary,
    pub lengths: Vec<f64>,
    pub points: Vec<usize>,
    /// Declared distance between the support of `V` and the boundary.
    #[serde(default)]
    pub margin: f64,
}

impl DomainSpec {
    pub fn interval(length: f64, points: usize, margin: f64) -> Self {
        DomainSpec { boundary: Boundary::Dirichlet, lengths: vec![length], points: vec![points], margin }
    }

    pub fn circle(length: f64, points: usize) -> Self {
        DomainSpec { boundary: Boundary::Periodic, lengths: vec![length], points: vec![points], margin: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.lengths.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.iter().any(|&p| p < MIN_POINTS) {
            return Err(SpectralError::Domain(format!("at least {MIN_POINTS} grid points per axis are required")));
        }
        if self.boundary == Boundary::Dirichlet && !(self.margin > 0.0) {
            return Err(SpectralError::Domain("Dirichlet domains need a positive support margin".into()));
        }
        Ok(())
    }

    pub fn grid<T: Real>(&self) -> Result<Grid<T>> {
        self.validate()?;
        Ok(Grid::new(self.boundary, self.lengths.iter().map(|&l| T::of(l)).collect(), self.points.clone())?)
    }

    /// Periodic box with the same side lengths and grid spacing as this
    /// Dirichlet box: one extra node per axis sits on the identified boundary.
    pub fn periodic_partner(&self) -> Result<DomainSpec> {
        if self.boundary != Boundary::Dirichlet {
            return Err(SpectralError::Domain("only Dirichlet domains have a periodic partner".into()));
        }
        Ok(DomainSpec {
            boundary: Boundary::Periodic,
            lengths: self.lengths.clone(),
            points: self.points.iter().map(|p| p + 1).collect(),
            margin: self.margin,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientProfile {
    Constant { value: f64 },
    /// `left` for `x_axis < position`, `right` otherwise.
    Step { axis: usize, position: f64, left: f64, right: f64 },
    /// `base + amplitude · exp(-1/(1 - |x-c|²/r²))`.
    Smooth { base: f64, amplitude: f64, center: Vec<f64>, radius: f64 },
}

/// Isotropic conductivity `a(x)·Id` with `μ⁻¹ ≤ a ≤ μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientField {
    pub profile: CoefficientProfile,
    #[serde(default = "default_mu")]
    pub mu: f64,
}

fn default_mu() -> f64 {
    1.0
}

impl Default for CoefficientField {
    fn default() -> Self {
        CoefficientField::identity()
    }
}

impl CoefficientField {
    pub fn identity() -> Self {
        CoefficientField { profile: CoefficientProfile::Constant { value: 1.0 }, mu: 1.0 }
    }

    pub fn is_identity(&self) -> bool {
        self.profile == CoefficientProfile::Constant { value: 1.0 }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.profile {
            CoefficientProfile::Constant { value } => *value,
            CoefficientProfile::Step { axis, position, left, right } => {
                if x[*axis] < *position {
                    *left
                } else {
                    *right
                }
            }
            CoefficientProfile::Smooth { base, amplitude, center, radius } => {
                let rho2: f64 = x.iter().zip(center).map(|(a, c)| ((a - c) / radius).powi(2)).sum();
                if rho2 >= 1.0 {
                    *base
                } else {
                    base + amplitude * (-1.0 / (1.0 - rho2)).exp()
                }
            }
        }
    }

    /// Samples `a` at `x`, checking the ellipticity bounds.
    pub fn checked_value(&self, x: &[f64]) -> Result<f64> {
        if !(self.mu >= 1.0) {
            return Err(SpectralError::Domain(format!("ellipticity constant mu = {} must be at least 1", self.mu)));
        }
        let a = self.value(x);
        let (lower, upper) = (1.0 / self.mu, self.mu);
        if !(a >= lower * (1.0 - 1e-12) && a <= upper * (1.0 + 1e-12)) {
            return Err(SpectralError::Ellipticity { value: a, location: x.to_vec(), lower, upper });
        }
        Ok(a)
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match &self.profile {
            CoefficientProfile::Step { axis, .. } if *axis >= dim => {
                Err(SpectralError::Domain(format!("step axis {axis} out of range for dimension {dim}")))
            }
            CoefficientProfile::Smooth { center, radius, .. } if center.len() != dim || !(*radius > 0.0) => {
                Err(SpectralError::Domain("smooth coefficient needs a center per axis and a positive radius".into()))
            }
            _ => Ok(()),
        }
    }
}
