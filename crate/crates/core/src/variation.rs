//! Total variation of graph signals and the correlation graph as the
//! minimiser of a regularised edge-based variation.

use crate::error::{GspError, Result};
use crate::graph::{laplacian, WeightedGraph};
use crate::scalar::Real;
use crate::signal::MultivariateSignal;
use crate::spectral::{GftKind, GraphFourierBasis};
use nalgebra::{DMatrix, DVector};

/// All four total-variation figures for one graph signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TvReport<T: Real> {
    /// ‖x − A x‖₁, never negative.
    pub node_tv: T,
    /// ½ Σ a_ij (x_i − x_j)², negative weights can make it negative.
    pub edge_tv: T,
    /// xᵀ L x.
    pub quadratic_form_tv: T,
    /// Σ λ_k x̃_k² over the Laplacian basis.
    pub spectral_tv: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TvFlavor {
    Node,
    Edge,
}

fn check_len<T: Real>(n: usize, x: &DVector<T>) -> Result<()> {
    if x.len() != n {
        return Err(GspError::DimensionMismatch { expected: n, found: x.len() });
    }
    Ok(())
}

/// Σ_i |x_i − Σ_j m_ij x_j| for any shift matrix `m` (A or A_norm).
pub fn tv_node<T: Real>(m: &DMatrix<T>, x: &DVector<T>) -> Result<T> {
    check_len(m.ncols(), x)?;
    if m.nrows() != m.ncols() {
        return Err(GspError::NotSquare(m.nrows(), m.ncols()));
    }
    Ok((x - m * x).lp_norm(1))
}

/// ½ Σ_ij a_ij (x_i − x_j)².
pub fn tv_edge<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>) -> Result<T> {
    check_len(g.n(), x)?;
    let w = g.weights();
    let mut acc = T::zero();
    for i in 0..g.n() {
        for j in 0..g.n() {
            let d = x[i] - x[j];
            acc += w[(i, j)] * d * d;
        }
    }
    Ok(acc * T::of(0.5))
}

/// l_p norm of the edge derivative vector at `node`:
/// (Σ_j a_ij^(p/2) |x_i − x_j|^p)^(1/p).
///
/// For even `p` the weight power is an integer power, so negative weights
/// are allowed; odd `p` with a negative weight yields NaN.
pub fn local_variation<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>, node: usize, p: u32) -> Result<T> {
    check_len(g.n(), x)?;
    if node >= g.n() || p == 0 {
        return Err(GspError::InvalidParameter(format!("node {node} / p {p} out of range")));
    }
    let pw = T::of(p as f64);
    let mut acc = T::zero();
    for j in 0..g.n() {
        let a = g.weights()[(node, j)];
        let weight = if p % 2 == 0 { a.powi((p / 2) as i32) } else { a.powf(pw / T::of(2.0)) };
        acc += weight * (x[node] - x[j]).abs().powi(p as i32);
    }
    Ok(if p == 1 { acc } else { acc.powf(T::one() / pw) })
}

/// Sum of the per-time-sample total variation over all columns of `x`.
pub fn tv_multivariate<T: Real>(g: &WeightedGraph<T>, x: &MultivariateSignal<T>, flavor: TvFlavor) -> Result<T> {
    if x.n_channels() != g.n() {
        return Err(GspError::DimensionMismatch { expected: g.n(), found: x.n_channels() });
    }
    match flavor {
        TvFlavor::Node => Ok((x.values() - g.weights() * x.values()).lp_norm(1)),
        TvFlavor::Edge => x
            .values()
            .column_iter()
            .map(|c| tv_edge(g, &c.into_owned()))
            .try_fold(T::zero(), |acc, v| v.map(|v| acc + v)),
    }
}

/// Σ_k λ_k x̃_k² using a Laplacian-based basis.
pub fn tv_spectral<T: Real>(basis: &GraphFourierBasis<T>, x: &DVector<T>) -> Result<T> {
    if basis.kind() != GftKind::LaplacianBased {
        return Err(GspError::KindMismatch("spectral total variation needs a Laplacian-based basis".into()));
    }
    check_len(basis.dim(), x)?;
    let xt = basis.modes().tr_mul(x);
    Ok(xt.iter().zip(basis.eigenvalues().iter()).fold(T::zero(), |acc, (c, l)| acc + *l * *c * *c))
}

/// Every total-variation figure for `x`; `basis` must be Laplacian-based
/// and built from `g`.
pub fn tv_report<T: Real>(g: &WeightedGraph<T>, basis: &GraphFourierBasis<T>, x: &DVector<T>) -> Result<TvReport<T>> {
    let l = laplacian(g);
    check_len(g.n(), x)?;
    Ok(TvReport {
        node_tv: tv_node(g.weights(), x)?,
        edge_tv: tv_edge(g, x)?,
        quadratic_form_tv: x.dot(&(l * x)),
        spectral_tv: tv_spectral(basis, x)?,
    })
}

/// Pearson correlation between channels, diagonal = 1.
pub fn pearson_matrix<T: Real>(x: &MultivariateSignal<T>) -> Result<DMatrix<T>> {
    if x.n_time() < 2 {
        return Err(GspError::InvalidParameter("correlation needs at least two time samples".into()));
    }
    let z = x.standardized()?;
    let v = z.values();
    let mut c = (v * v.transpose()) / T::of_usize(x.n_time());
    // rounding can leave |c_ij| a hair above 1
    for e in c.iter_mut() {
        *e = e.max(-T::one()).min(T::one());
    }
    c.fill_diagonal(T::one());
    Ok(c)
}

/// Functional-connectivity graph: pairwise Pearson correlations with the
/// diagonal zeroed.
pub fn pearson_graph<T: Real>(x: &MultivariateSignal<T>) -> Result<WeightedGraph<T>> {
    let mut c = pearson_matrix(x)?;
    c.fill_diagonal(T::zero());
    WeightedGraph::new(c)
}

fn check_normalized<T: Real>(x: &MultivariateSignal<T>) -> Result<()> {
    let tol = T::of(1e-6).max(T::eigen_tol());
    let n_t = T::of_usize(x.n_time());
    for (row, r) in x.values().row_iter().enumerate() {
        let mean = r.sum() / n_t;
        let sd = (r.iter().map(|v| (*v - mean) * (*v - mean)).fold(T::zero(), |a, b| a + b) / n_t).sqrt();
        if mean.abs() > tol || (sd - T::one()).abs() > tol {
            return Err(GspError::NotNormalized { row, mean: mean.as_f64(), sd: sd.as_f64() });
        }
    }
    Ok(())
}

/// ½ Σ_k (x_ik − x_jk)² for every pair: the derivative of the edge
/// variation with respect to a_ij.
fn pairwise_half_sq_dist<T: Real>(x: &DMatrix<T>) -> DMatrix<T> {
    let n = x.nrows();
    DMatrix::from_fn(n, n, |i, j| (x.row(i) - x.row(j)).norm_squared() * T::of(0.5))
}

/// Objective minimised by [`learn_correlation_graph`]:
/// TV_edge(X; A) + N_t · ½‖J − A‖_F², with the regulariser applied at every
/// time sample.
pub fn correlation_objective<T: Real>(x: &MultivariateSignal<T>, a: &DMatrix<T>) -> Result<T> {
    let g = WeightedGraph::new(a.clone())?;
    let tv = tv_multivariate(&g, x, TvFlavor::Edge)?;
    let reg = a.iter().fold(T::zero(), |acc, v| acc + (T::one() - *v) * (T::one() - *v)) * T::of(0.5);
    Ok(tv + T::of_usize(x.n_time()) * reg)
}

/// ∂/∂a_ij of [`correlation_objective`].
pub fn correlation_objective_gradient<T: Real>(x: &MultivariateSignal<T>, a: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = x.n_channels();
    if a.shape() != (n, n) {
        return Err(GspError::DimensionMismatch { expected: n, found: a.nrows() });
    }
    let e = pairwise_half_sq_dist(x.values());
    let n_t = T::of_usize(x.n_time());
    Ok(e - a.map(|v| (T::one() - v) * n_t))
}

/// Outcome of [`learn_correlation_graph`].
#[derive(Debug, Clone)]
pub struct LearnedGraph<T: Real> {
    /// Learned weights including the diagonal (which converges to 1).
    pub weights: DMatrix<T>,
    pub iterations: usize,
    /// Objective value before the first and after every step.
    pub objective_trace: Vec<T>,
}

/// Full-gradient descent from the all-ones matrix on
/// [`correlation_objective`] for row-standardised input. The minimiser is
/// a_ij = (1/N_t) Σ_k x_ik x_jk, the Pearson correlation matrix.
pub fn learn_correlation_graph<T: Real>(x_norm: &MultivariateSignal<T>, step: T, iters: usize) -> Result<LearnedGraph<T>> {
    if !(step > T::zero()) {
        return Err(GspError::InvalidParameter(format!("step must be positive, got {step}")));
    }
    check_normalized(x_norm)?;
    let n = x_norm.n_channels();
    let n_t = T::of_usize(x_norm.n_time());
    let grad_tol = T::eigen_tol() * T::of(10.0);
    let e = pairwise_half_sq_dist(x_norm.values());
    let reg = |a: &DMatrix<T>| a.iter().fold(T::zero(), |acc, v| acc + (T::one() - *v) * (T::one() - *v)) * T::of(0.5);
    let objective = |a: &DMatrix<T>| e.component_mul(a).sum() + n_t * reg(a);

    let mut a = DMatrix::from_element(n, n, T::one());
    let mut trace = vec![objective(&a)];
    let mut grad_norm = T::zero();
    for it in 0..iters {
        let grad = &e - a.map(|v| (T::one() - v) * n_t);
        grad_norm = grad.amax();
        if grad_norm <= grad_tol {
            return Ok(LearnedGraph { weights: a, iterations: it, objective_trace: trace });
        }
        a -= grad * step;
        trace.push(objective(&a));
    }
    Err(GspError::NotConverged { iters, grad_norm: grad_norm.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cyclic_shift;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn node_tv_examples() {
        let c = cyclic_shift::<f64>(4).unwrap();
        assert_eq!(tv_node(c.weights(), &dvector![1.0, 1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(tv_node(c.weights(), &DVector::zeros(4)).unwrap(), 0.0);
        assert!(tv_node(c.weights(), &DVector::zeros(3)).is_err());
    }

    #[test]
    fn edge_tv_examples() {
        let g = WeightedGraph::new(dmatrix![0.0, 1.0; 1.0, 0.0]).unwrap();
        assert_eq!(tv_edge(&g, &dvector![1.0, -1.0]).unwrap(), 4.0);
        assert_eq!(tv_edge(&g, &dvector![3.0, 3.0]).unwrap(), 0.0);
        let neg = WeightedGraph::new(dmatrix![0.0, -1.0; -1.0, 0.0]).unwrap();
        assert_eq!(tv_edge(&neg, &dvector![1.0, -1.0]).unwrap(), -4.0);
    }

    #[test]
    fn local_variation_p2_matches_edge_tv() {
        let g = WeightedGraph::new(dmatrix![0.0f64, 0.5, 0.2; 0.5, 0.0, 0.3; 0.2, 0.3, 0.0]).unwrap();
        let x = dvector![1.0, -0.5, 2.0];
        let total: f64 = (0..3).map(|i| local_variation(&g, &x, i, 2).unwrap().powi(2)).sum();
        assert!((0.5 * total - tv_edge(&g, &x).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn multivariate_edge_tv_is_columnwise_sum() {
        let g = WeightedGraph::new(dmatrix![0.0f64, 0.5, 0.2; 0.5, 0.0, 0.3; 0.2, 0.3, 0.0]).unwrap();
        let x = MultivariateSignal::new(dmatrix![1.0, 0.3; -0.5, 2.0; 2.0, -1.0]).unwrap();
        let total = tv_multivariate(&g, &x, TvFlavor::Edge).unwrap();
        let parts = tv_edge(&g, &dvector![1.0, -0.5, 2.0]).unwrap() + tv_edge(&g, &dvector![0.3, 2.0, -1.0]).unwrap();
        assert!((total - parts).abs() <= 1e-12);
        let constant = MultivariateSignal::new(DMatrix::from_element(3, 4, 1.5)).unwrap();
        assert_eq!(tv_multivariate(&g, &constant, TvFlavor::Edge).unwrap(), 0.0);
    }

    #[test]
    fn spectral_tv_requires_laplacian_basis() {
        let b = GraphFourierBasis::<f64>::identity(3, GftKind::AdjacencyBased);
        assert!(matches!(tv_spectral(&b, &dvector![1.0, 2.0, 3.0]), Err(GspError::KindMismatch(_))));
    }

    #[test]
    fn pearson_examples() {
        let x = MultivariateSignal::from_rows(&[
            vec![1.0f64, 2.0, 0.5, -1.0],
            vec![1.0, 2.0, 0.5, -1.0],
            vec![-1.0, -2.0, -0.5, 1.0],
        ])
        .unwrap();
        let m = pearson_matrix(&x).unwrap();
        assert!((m[(0, 1)] - 1.0).abs() < 1e-12);
        assert!((m[(0, 2)] + 1.0).abs() < 1e-12);
        let g = pearson_graph(&x).unwrap();
        assert!(!g.has_self_loops());
        let flat = MultivariateSignal::from_rows(&[vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]]).unwrap();
        assert!(matches!(pearson_graph(&flat), Err(GspError::ZeroVarianceChannel(0))));
    }

    #[test]
    fn learner_rejects_unnormalized_input() {
        let x = MultivariateSignal::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.0, 1.0, 5.0]]).unwrap();
        assert!(matches!(learn_correlation_graph(&x, 0.1, 10), Err(GspError::NotNormalized { .. })));
    }

    #[test]
    fn learner_reports_non_convergence() {
        let x = MultivariateSignal::from_rows(&[vec![1.0, 2.0, 3.0, 0.0], vec![0.0, 1.0, 5.0, 2.0]])
            .unwrap()
            .standardized()
            .unwrap();
        assert!(matches!(learn_correlation_graph(&x, 1e-6, 3), Err(GspError::NotConverged { .. })));
    }
}
