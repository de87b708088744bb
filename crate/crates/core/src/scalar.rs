//! Scalar abstractions shared by the exact and floating-point layers.
//!
//! Symbolic objects (simplex polynomials, invariant expressions) are generic
//! over [`Coeff`], which is satisfied both by the exact [`crate::Rational`] and
//! by `f32`/`f64`. Numerical objects (sampled potentials, spectral models) are
//! generic over [`Real`].

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// A coefficient field for polynomial algebra.
pub trait Coeff:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_u64_exact(v: u64) -> Self {
        Self::from_u64(v).expect("coefficient type cannot represent integer")
    }

    fn from_i64_exact(v: i64) -> Self {
        Self::from_i64(v).expect("coefficient type cannot represent integer")
    }
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Num
        + Neg<Output = T>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar used by the numerical layers: `f32` or `f64`.
pub trait Real: nalgebra::RealField + Copy + rustfft::FftNum {
    fn of(v: f64) -> Self {
        nalgebra::convert(v)
    }

    fn of_usize(v: usize) -> Self {
        nalgebra::convert(v as f64)
    }

    fn to_f64(self) -> f64 {
        nalgebra::try_convert(self).expect("f32/f64 always convert to f64")
    }

    fn magnitude(self) -> Self {
        nalgebra::ComplexField::abs(self)
    }
}

impl Real for f32 {}
impl Real for f64 {}
