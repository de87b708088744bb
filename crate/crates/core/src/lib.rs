//! Exact small-time heat-trace invariants for `-Δ + V`.
//!
//! The symbolic side is generic over a coefficient field ([`scalar::Coeff`]) and
//! is used with the exact [`Rational`]; the numerical side is generic over
//! [`scalar::Real`] (`f32`/`f64`). Concrete aliases are exported at the root.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bridge;
pub mod error;
pub mod eval;
pub mod ibp;
pub mod invariant;
pub mod multi_index;
pub mod poly;
pub mod potential;
pub mod rational;
pub mod recurrence;
pub mod scalar;

pub use bridge::{coefficient, mirror, parity_vanishes, wick_moment, BridgeCovariance, CoefficientEngine};
pub use error::{Error, Result};
pub use eval::{evaluate_invariant, h2_diagnostic, h2_diagnostic_with, H2Diagnostic};
pub use ibp::ibp_canonicalize;
pub use invariant::{assemble_invariant, DiffMonomial, ExpressionExport};
pub use multi_index::{enumerate_index_tuples, IndexTuple, MultiIndex};
pub use potential::{Boundary, Grid, PotentialSpec, PotentialTerm};
pub use recurrence::{i_closed, script_i, TwoParamIntegral};
pub use scalar::{Coeff, Real};

/// Exact arbitrary-precision fraction.
pub type Rational = num_rational::BigRational;
/// Polynomial in the simplex variables with exact coefficients.
pub type SimplexPoly = poly::Poly<Rational>;
/// `value · (4π)^{-power/2}` with an exact value.
pub type NormalizedCoefficient = bridge::Normalized<Rational>;
/// Exact heat invariant.
pub type InvariantExpression = invariant::Expression<Rational>;
/// Potential sampled on an `f64` grid.
pub type PotentialSample = potential::Potential<f64>;
/// `f64` tensor grid.
pub type SampleGrid = potential::Grid<f64>;
