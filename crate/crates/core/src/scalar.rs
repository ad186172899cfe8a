//! Floating-point scalar abstraction.
//!
//! Every linear-algebra routine in this crate is generic over the real scalar
//! backing its complex amplitudes. The trait bundles the `num-traits`
//! capabilities we rely on together with the numeric tolerances that make
//! sense for that precision, so `f32` instantiations do not get judged by
//! `f64` standards.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar type usable as the base field for states and matrices.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum<Self> + Debug + Send + Sync + 'static
{
    /// Tolerance for algebraic identities (unitarity, hermiticity, trace).
    fn algebra_tolerance() -> Self;

    /// Tolerance for normalization preconditions checked before a measurement.
    fn norm_tolerance() -> Self;

    /// Most negative eigenvalue / probability admitted as rounding noise.
    fn psd_tolerance() -> Self;

    /// Shorthand for lossless conversion from an `f64` literal.
    fn from_real(x: f64) -> Self {
        Self::from_f64(x).expect("literal must be representable")
    }
}

impl Scalar for f64 {
    fn algebra_tolerance() -> Self {
        1e-12
    }

    fn norm_tolerance() -> Self {
        1e-9
    }

    fn psd_tolerance() -> Self {
        1e-10
    }
}

impl Scalar for f32 {
    fn algebra_tolerance() -> Self {
        1e-5
    }

    fn norm_tolerance() -> Self {
        1e-4
    }

    fn psd_tolerance() -> Self {
        1e-4
    }
}
