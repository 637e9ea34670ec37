//! Scalar abstraction shared by the numeric modules.
//!
//! The solver, regression and meta-game code is written once against
//! [`Scalar`] and instantiated for `f64` (the default everywhere) or `f32`.
//! Tolerances are per-type so that single precision gets looser gates.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Smallest pivot magnitude accepted by elimination and ratio tests.
    const PIVOT_EPS: f64;
    /// Default tolerance for the best-response check on a computed equilibrium.
    const VERIFY_TOL: f64;
    /// Max-norm distance under which two strategy profiles are the same.
    const DEDUP_TOL: f64;
    /// Allowed deviation of a probability vector's sum from one.
    const SUM_TOL: f64;

    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(value: usize) -> Self {
        Self::from_usize(value).unwrap_or_else(Self::infinity)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const PIVOT_EPS: f64 = 1e-12;
    const VERIFY_TOL: f64 = 1e-8;
    const DEDUP_TOL: f64 = 1e-7;
    const SUM_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const PIVOT_EPS: f64 = 1e-6;
    const VERIFY_TOL: f64 = 1e-4;
    const DEDUP_TOL: f64 = 1e-4;
    const SUM_TOL: f64 = 1e-5;
}
