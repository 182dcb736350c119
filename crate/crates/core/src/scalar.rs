//! Scalar abstraction for the linear-algebra modules.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar usable by the graph, spectral, variation and filter code.
///
/// Tolerances scale with the precision of the type so the same checks work
/// for `f32` and `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + Debug + Send + Sync + 'static
{
    /// Absolute tolerance used to decide whether a weight matrix is symmetric.
    fn symmetry_tol() -> Self;
    /// Tolerance for "symmetric enough to eigendecompose" and for grouping
    /// degenerate eigenvalues.
    fn eigen_tol() -> Self;
    /// Entries with magnitude below this count as zero for the sign convention.
    fn zero_tol() -> Self;

    #[inline]
    fn of(x: f64) -> Self {
        nalgebra::convert(x)
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        nalgebra::convert(n as f64)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn symmetry_tol() -> Self {
        1e-12
    }
    fn eigen_tol() -> Self {
        1e-9
    }
    fn zero_tol() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn symmetry_tol() -> Self {
        1e-5
    }
    fn eigen_tol() -> Self {
        1e-4
    }
    fn zero_tol() -> Self {
        1e-6
    }
}
