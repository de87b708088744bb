//! Spectral oracle for heat-trace differences of `-div(a∇·) + V` on
//! intervals, rectangles and tori.
//!
//! Models are generic over [`heatrace_core::Real`]; the `f64` aliases below
//! are what the command line uses.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod domain;
pub mod duhamel;
pub mod error;
pub mod fit;
pub mod model;
pub mod trace;

pub use boundary::{boundary_gap, BoundaryGap, GapFit, GapOptions};
pub use domain::{CoefficientField, CoefficientProfile, DomainSpec};
pub use duhamel::{duhamel_terms, DuhamelOperator, DuhamelOptions, DuhamelTerms};
pub use error::{Result, SpectralError};
pub use fit::{fit_expansion, FitOptions, FitReport};
pub use model::{discretize, discretize_with, Eigenvectors};
pub use trace::{heat_trace, log_times, trace_diff, TraceSeries};

/// Double-precision spectral model.
pub type SpectralModel = model::SpectralModel<f64>;
