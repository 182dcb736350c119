//! Cross-module identity checks run by `gsp verify`.

use gsp_core::filters::{
    cyclic_convolve, cyclic_convolve_dft, filter_matrix, graph_convolve, graph_convolve_spectral, graph_wavelet,
    poly_to_spectral, FilterSpec,
};
use gsp_core::graph::{cyclic_shift, laplacian, normalized_adjacency};
use gsp_core::rng::{self, DrawKind};
use gsp_core::spectral::{
    covariance_matrix, dft_matrix, eigendecompose_symmetric, gft, gft_basis, igft, pca_components, GftKind,
};
use gsp_core::variation::{correlation_objective_gradient, learn_correlation_graph, pearson_matrix, tv_edge, tv_node, tv_spectral};
use gsp_core::{Graph, GraphMatrixKind, Signal};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

pub const IDENTITY_TOL: f64 = 1e-9;
pub const WAVELET_TOL: f64 = 1e-12;
pub const OPTIMIZER_TOL: f64 = 1e-6;
const TRIALS: u64 = 100;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, err: f64, tol: f64) -> CheckResult {
    CheckResult { name, passed: err <= tol, detail: format!("max error {err:.3e} (tolerance {tol:.0e})") }
}

fn failed(name: &'static str, e: impl std::fmt::Display) -> CheckResult {
    CheckResult { name, passed: false, detail: format!("error: {e}") }
}

macro_rules! attempt {
    ($name:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return failed($name, e),
        }
    };
}

/// Random symmetric graph on 3..=12 nodes with weights in [0, 1).
pub fn random_graph(trial: u64) -> Graph {
    let mut r = rng::stream(0x5eed, trial, 0, DrawKind::Auxiliary);
    let n = 3 + (rng::uniform(&mut r, 0.0, 10.0) as usize);
    let mut a = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..i {
            let v = rng::uniform(&mut r, 0.0, 1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    Graph::new(a).expect("symmetric by construction")
}

fn random_vector(n: usize, trial: u64, channel: u32) -> DVector<f64> {
    DVector::from_vec(rng::normals(&mut rng::stream(0x5eed, trial, channel, DrawKind::Innovation), n))
}

fn random_signal(rows: usize, cols: usize, trial: u64) -> Signal {
    let data: Vec<Vec<f64>> =
        (0..rows).map(|c| rng::normals(&mut rng::stream(0xda7a, trial, c as u32, DrawKind::Auxiliary), cols)).collect();
    Signal::from_rows(&data).expect("finite draws")
}

fn max_over<F: FnMut(u64) -> gsp_core::Result<f64>>(mut f: F) -> gsp_core::Result<f64> {
    let mut worst = 0.0f64;
    for t in 0..TRIALS {
        worst = worst.max(f(t)?);
    }
    Ok(worst)
}

fn dft_diagonalizes_cyclic_shift() -> CheckResult {
    let name = "dft_diagonalizes_cyclic_shift";
    let mut worst = 0.0f64;
    for n in [2usize, 5, 8, 16] {
        let ac = attempt!(name, cyclic_shift::<f64>(n)).weights().map(|v| Complex::new(v, 0.0));
        let f = attempt!(name, dft_matrix::<f64>(n));
        let d = &f * ac * f.adjoint();
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j {
                    Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * i as f64 / n as f64)
                } else {
                    Complex::new(0.0, 0.0)
                };
                worst = worst.max((d[(i, j)] - expected).norm());
            }
        }
    }
    check(name, worst, IDENTITY_TOL)
}

fn cyclic_laplacian() -> CheckResult {
    let name = "cyclic_laplacian_is_identity_minus_shift";
    let ac = attempt!(name, cyclic_shift::<f64>(7));
    let expected = DMatrix::identity(7, 7) - ac.weights();
    check(name, (laplacian(&ac) - expected).amax(), 0.0)
}

fn tv_edge_quadratic_form() -> CheckResult {
    let name = "tv_edge_equals_quadratic_form";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let x = random_vector(g.n(), t, 0);
            Ok((tv_edge(&g, &x)? - x.dot(&(laplacian(&g) * &x))).abs())
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn tv_edge_spectral() -> CheckResult {
    let name = "tv_edge_equals_spectral_sum";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let x = random_vector(g.n(), t, 0);
            let b = gft_basis(&g, GftKind::LaplacianBased, GraphMatrixKind::Laplacian)?;
            Ok((tv_edge(&g, &x)? - tv_spectral(&b, &x)?).abs())
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn tv_node_eigenvectors() -> CheckResult {
    let name = "tv_node_of_normalized_adjacency_modes";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let an = normalized_adjacency(&g)?;
            let e = eigendecompose_symmetric(&an)?;
            let lmax = e.values.amax();
            let mut worst = 0.0f64;
            for k in 0..g.n() {
                let v = e.vectors.column(k).into_owned();
                let v = &v / v.lp_norm(1);
                worst = worst.max((tv_node(&an, &v)? - (1.0 - e.values[k] / lmax).abs()).abs());
            }
            Ok(worst)
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn laplacian_eigenvalue_is_mode_tv() -> CheckResult {
    let name = "laplacian_eigenvalue_equals_mode_tv";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let b = gft_basis(&g, GftKind::LaplacianBased, GraphMatrixKind::Laplacian)?;
            let mut worst = 0.0f64;
            for k in 0..g.n() {
                worst = worst.max((tv_edge(&g, &b.mode(k))? - b.eigenvalues()[k]).abs());
            }
            Ok(worst)
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn gft_round_trip() -> CheckResult {
    let name = "gft_inverse_and_parseval";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let x = random_signal(g.n(), 4, t);
            let mut worst = 0.0f64;
            for kind in [GftKind::AdjacencyBased, GftKind::LaplacianBased] {
                let b = gft_basis(&g, kind, kind.default_source())?;
                let xt = gft(&b, &x)?;
                worst = worst.max((igft(&b, &xt)?.values() - x.values()).amax());
                worst = worst.max((xt.values().norm() - x.values().norm()).abs());
            }
            Ok(worst)
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn filter_equivalence() -> CheckResult {
    let name = "vertex_and_spectral_filters_agree";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let n = g.n();
            let p: Vec<f64> = random_vector(3, t, 7).iter().copied().collect();
            let mut worst = 0.0f64;
            for kind in [GftKind::AdjacencyBased, GftKind::LaplacianBased] {
                let b = gft_basis(&g, kind, kind.default_source())?;
                let h: Vec<f64> = poly_to_spectral(&p, b.eigenvalues()).iter().copied().collect();
                let hv = filter_matrix(&g, &FilterSpec::vertex(p.clone(), kind))?;
                let hs = filter_matrix(&g, &FilterSpec::spectral(h, kind))?;
                worst = worst.max((hv - hs).amax() / n as f64);
            }
            Ok(worst)
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn wavelet_is_filter_column() -> CheckResult {
    let name = "graph_wavelet_is_filter_column";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let p = &[1.0, -0.5, 0.25, 0.125][..g.n().min(4)];
            let s: f64 = 0.7;
            let scaled: Vec<f64> = p.iter().enumerate().map(|(k, c)| c * s.powi(k as i32)).collect();
            let h = filter_matrix(&g, &FilterSpec::vertex(scaled, GftKind::AdjacencyBased))?;
            let nu = (t as usize) % g.n();
            let w = graph_wavelet(&g, nu, p, s, GftKind::AdjacencyBased)?;
            Ok((w - h.column(nu)).amax())
        })
    );
    check(name, err, WAVELET_TOL)
}

fn cyclic_convolution_routes() -> CheckResult {
    let name = "cyclic_convolution_matrix_equals_dft";
    let err = attempt!(
        name,
        max_over(|t| {
            let n = 2 + (t as usize % 15);
            let s = random_vector(n, t, 1);
            let r = random_vector(n, t, 2);
            Ok((cyclic_convolve(&s, &r)? - cyclic_convolve_dft(&s, &r)?).amax())
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn graph_convolution_routes() -> CheckResult {
    let name = "graph_convolution_vertex_equals_spectral";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let x = random_vector(g.n(), t, 1);
            let mut y = random_vector(g.n(), t, 2);
            // Keep the polynomial short so powers of A stay well scaled.
            y.rows_mut(3, g.n() - 3).fill(0.0);
            Ok((graph_convolve(&g, &x, &y)? - graph_convolve_spectral(&g, &x, &y)?).amax())
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn pca_equivalence() -> CheckResult {
    let name = "covariance_gft_equals_pca";
    let err = attempt!(
        name,
        max_over(|t| {
            let x = random_signal(6, 200, t);
            let cov = covariance_matrix(&x)?;
            let b = gft_basis(&Graph::new(cov)?, GftKind::AdjacencyBased, GraphMatrixKind::Adjacency)?;
            // Oracle: left singular vectors of the centred data.
            let mut c = x.values().clone();
            for mut row in c.row_iter_mut() {
                let m = row.mean();
                row.add_scalar_mut(-m);
            }
            let svd = c.svd(true, false);
            let u = svd.u.expect("requested");
            let mut order: Vec<usize> = (0..6).collect();
            order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
            let pca = pca_components(&x)?;
            let mut worst = 0.0f64;
            for (k, &j) in order.iter().enumerate() {
                let dot = b.mode(k).dot(&u.column(j)).abs();
                worst = worst.max((1.0 - dot).abs()).max((b.mode(k) - pca.mode(k)).amax());
            }
            Ok(worst)
        })
    );
    check(name, err, IDENTITY_TOL)
}

fn optimizer_matches_pearson() -> CheckResult {
    let name = "correlation_optimizer_reaches_pearson";
    let mut worst = 0.0f64;
    for t in 0..10 {
        let x = attempt!(name, random_signal(5, 200, 1000 + t).standardized());
        let learned = attempt!(name, learn_correlation_graph(&x, 1.0 / (2.0 * 200.0), 10_000));
        let oracle = attempt!(name, pearson_matrix(&x));
        worst = worst.max((learned.weights - oracle).amax());
    }
    check(name, worst, OPTIMIZER_TOL)
}

fn gradient_vanishes_at_pearson() -> CheckResult {
    let name = "objective_gradient_vanishes_at_pearson";
    let mut worst = 0.0f64;
    for t in 0..10 {
        let x = attempt!(name, random_signal(5, 200, 2000 + t).standardized());
        // Oracle: (1/N_t) X Xᵀ for row-standardised X.
        let oracle = x.values() * x.values().transpose() / 200.0;
        let g = attempt!(name, correlation_objective_gradient(&x, &oracle));
        worst = worst.max(g.amax());
    }
    check(name, worst, IDENTITY_TOL)
}

fn dc_mode_is_constant() -> CheckResult {
    let name = "lowest_laplacian_mode_is_constant";
    let err = attempt!(
        name,
        max_over(|t| {
            let g = random_graph(t);
            let b = gft_basis(&g, GftKind::LaplacianBased, GraphMatrixKind::Laplacian)?;
            let c = 1.0 / (g.n() as f64).sqrt();
            Ok(b.mode(0).map(|v| v - c).amax().max(b.eigenvalues()[0].abs()))
        })
    );
    check(name, err, IDENTITY_TOL)
}

/// Runs every check in a fixed order.
pub fn run_checks() -> Vec<CheckResult> {
    vec![
        dft_diagonalizes_cyclic_shift(),
        cyclic_laplacian(),
        tv_edge_quadratic_form(),
        tv_edge_spectral(),
        tv_node_eigenvectors(),
        laplacian_eigenvalue_is_mode_tv(),
        gft_round_trip(),
        filter_equivalence(),
        wavelet_is_filter_column(),
        cyclic_convolution_routes(),
        graph_convolution_routes(),
        pca_equivalence(),
        optimizer_matches_pearson(),
        gradient_vanishes_at_pearson(),
        dc_mode_is_constant(),
    ]
}
