use crate::error::{GspError, Result};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};

/// Channels × time matrix. Row `i` is the time signal of channel `i`, column
/// `t` is the graph signal at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSignal<T: Real> {
    values: DMatrix<T>,
}

impl<T: Real> MultivariateSignal<T> {
    pub fn new(values: DMatrix<T>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(GspError::InvalidParameter(
                "signal needs at least one channel and one time sample".into(),
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GspError::NonFinite);
        }
        Ok(Self { values })
    }

    /// Builds a signal from row-major channel data.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n_c = rows.len();
        let n_t = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n_t) {
            return Err(GspError::LengthMismatch { left: n_t, right: bad.len() });
        }
        Self::new(DMatrix::from_fn(n_c, n_t, |i, j| rows[i][j]))
    }

    /// A single graph signal (one time sample).
    pub fn from_vector(x: &DVector<T>) -> Result<Self> {
        Self::new(DMatrix::from_column_slice(x.len(), 1, x.as_slice()))
    }

    pub fn n_channels(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_time(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    pub fn into_values(self) -> DMatrix<T> {
        self.values
    }

    pub fn channel(&self, i: usize) -> Vec<T> {
        self.values.row(i).iter().copied().collect()
    }

    /// Each row shifted to mean 0 and scaled to (population) standard deviation 1.
    pub fn standardized(&self) -> Result<Self> {
        let n_t = T::of_usize(self.n_time());
        let mut out = self.values.clone();
        for (i, mut row) in out.row_iter_mut().enumerate() {
            let mean = row.sum() / n_t;
            row.add_scalar_mut(-mean);
            let sd = (row.norm_squared() / n_t).sqrt();
            if sd <= T::zero_tol() {
                return Err(GspError::ZeroVarianceChannel(i));
            }
            row /= sd;
        }
        Ok(Self { values: out })
    }
}
