//! Floating-point scalar abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar the library computes with: `f32` or `f64`.
///
/// Besides the arithmetic supplied by [`Float`], each scalar carries the
/// default tolerances used by validation, the explicit formulas, the
/// eigensolver and the simplex engine. The `f64` values are the documented
/// defaults; `f32` uses looser values scaled to its precision.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    /// Row-sum and nonnegativity tolerance for matrix-class validation.
    const VALIDATION_TOL: f64;
    /// Agreement tolerance for explicit seminorm formulas.
    const FORMULA_TOL: f64;
    /// Relative convergence tolerance for the symmetric eigensolver.
    const EIGEN_TOL: f64;
    /// Pivot / reduced-cost tolerance used inside the simplex tableau.
    const PIVOT_TOL: f64;
    /// Feasibility margin for LP outcomes.
    const LP_FEAS_TOL: f64;

    /// Converts an `f64` literal; panics only if the value is not representable,
    /// which cannot happen for finite inputs to `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal converts")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize converts to float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const VALIDATION_TOL: f64 = 1e-12;
    const FORMULA_TOL: f64 = 1e-9;
    const EIGEN_TOL: f64 = 1e-10;
    const PIVOT_TOL: f64 = 1e-11;
    const LP_FEAS_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const VALIDATION_TOL: f64 = 1e-5;
    const FORMULA_TOL: f64 = 1e-4;
    const EIGEN_TOL: f64 = 1e-5;
    const PIVOT_TOL: f64 = 1e-6;
    const LP_FEAS_TOL: f64 = 1e-4;
}
