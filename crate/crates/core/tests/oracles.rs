use gsp_core::rng::{self, DrawKind};
use gsp_core::spectral::{covariance_matrix, gft_basis, pca_components, GftKind};
use gsp_core::variation::{correlation_objective, learn_correlation_graph, pearson_matrix};
use gsp_core::{Graph, GraphMatrixKind, Signal};
use nalgebra::DMatrix;

fn signal(rows: usize, cols: usize, seed: u64) -> Signal {
    let data: Vec<Vec<f64>> =
        (0..rows).map(|c| rng::normals(&mut rng::stream(seed, 0, c as u32, DrawKind::Auxiliary), cols)).collect();
    Signal::from_rows(&data).unwrap()
}

/// Pearson correlation computed from its textbook definition.
fn pearson_oracle(x: &Signal) -> DMatrix<f64> {
    let v = x.values();
    let (n, t) = v.shape();
    DMatrix::from_fn(n, n, |i, j| {
        let mi = v.row(i).mean();
        let mj = v.row(j).mean();
        let mut sxy = 0.0;
        let mut sxx = 0.0;
        let mut syy = 0.0;
        for k in 0..t {
            let a = v[(i, k)] - mi;
            let b = v[(j, k)] - mj;
            sxy += a * b;
            sxx += a * a;
            syy += b * b;
        }
        sxy / (sxx * syy).sqrt()
    })
}

#[test]
fn learned_graph_matches_pearson_oracle() {
    for seed in 0..10 {
        let x = signal(5, 200, seed).standardized().unwrap();
        let learned = learn_correlation_graph(&x, 1.0 / 400.0, 10_000).unwrap();
        let oracle = pearson_oracle(&x);
        assert!((&learned.weights - &oracle).amax() <= 1e-6);
        assert!((pearson_matrix(&x).unwrap() - &oracle).amax() <= 1e-12);
        assert!(learned.objective_trace.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        // The oracle is a minimiser: small perturbations do not lower the objective.
        let base = correlation_objective(&x, &oracle).unwrap();
        let mut bumped = oracle.clone();
        bumped[(0, 1)] += 1e-3;
        bumped[(1, 0)] += 1e-3;
        assert!(correlation_objective(&x, &bumped).unwrap() > base);
    }
}

#[test]
fn covariance_graph_modes_are_principal_components() {
    for seed in 0..5 {
        let x = signal(6, 300, 100 + seed);
        let b = gft_basis(&Graph::new(covariance_matrix(&x).unwrap()).unwrap(), GftKind::AdjacencyBased, GraphMatrixKind::Adjacency)
            .unwrap();
        let p = pca_components(&x).unwrap();
        let mut c = x.values().clone();
        for mut row in c.row_iter_mut() {
            let m = row.mean();
            row.add_scalar_mut(-m);
        }
        let svd = c.svd(true, false);
        let u = svd.u.unwrap();
        let mut order: Vec<usize> = (0..6).collect();
        order.sort_by(|&a, &bb| svd.singular_values[bb].total_cmp(&svd.singular_values[a]));
        for (k, &j) in order.iter().enumerate() {
            assert!((b.mode(k).dot(&u.column(j)).abs() - 1.0).abs() <= 1e-9);
            assert!((b.mode(k) - p.mode(k)).amax() <= 1e-12);
            let var = svd.singular_values[j].powi(2) / 299.0;
            assert!((b.eigenvalues()[k] - var).abs() <= 1e-9);
        }
    }
}
