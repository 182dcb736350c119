//! Weighted graphs and the matrix representations used as graph shift
//! operators: adjacency, degree, Laplacian and their normalised variants.

use crate::error::{GspError, Result};
use crate::scalar::Real;
use crate::signal::MultivariateSignal;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};

/// Which matrix of a graph is used as the operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GraphMatrixKind {
    Adjacency,
    NormalizedAdjacency,
    Laplacian,
    NormalizedLaplacian,
    SymmetrizedLaplacian,
}

impl GraphMatrixKind {
    pub fn is_laplacian(self) -> bool {
        matches!(
            self,
            Self::Laplacian | Self::NormalizedLaplacian | Self::SymmetrizedLaplacian
        )
    }
}

impl fmt::Display for GraphMatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Adjacency => "adjacency",
            Self::NormalizedAdjacency => "normalized_adjacency",
            Self::Laplacian => "laplacian",
            Self::NormalizedLaplacian => "normalized_laplacian",
            Self::SymmetrizedLaplacian => "symmetrized_laplacian",
        };
        f.write_str(s)
    }
}

/// Square real weight matrix with cached symmetry and self-loop flags.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph<T: Real> {
    weights: DMatrix<T>,
    symmetric: bool,
    has_self_loops: bool,
}

impl<T: Real> WeightedGraph<T> {
    pub fn new(weights: DMatrix<T>) -> Result<Self> {
        Self::with_tolerance(weights, T::symmetry_tol())
    }

    /// Like [`WeightedGraph::new`] with a caller-chosen symmetry tolerance.
    pub fn with_tolerance(weights: DMatrix<T>, tol: T) -> Result<Self> {
        let (r, c) = weights.shape();
        if r != c {
            return Err(GspError::NotSquare(r, c));
        }
        if r == 0 {
            return Err(GspError::EmptyGraph);
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(GspError::NonFinite);
        }
        let symmetric = max_asymmetry(&weights) <= tol;
        let has_self_loops = weights.diagonal().iter().any(|d| *d != T::zero());
        Ok(Self { weights, symmetric, has_self_loops })
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<T> {
        &self.weights
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn has_self_loops(&self) -> bool {
        self.has_self_loops
    }

    /// Copy with the diagonal set to zero.
    pub fn without_self_loops(&self) -> Self {
        let mut w = self.weights.clone();
        w.fill_diagonal(T::zero());
        Self { weights: w, symmetric: self.symmetric, has_self_loops: false }
    }

    /// P·A·Pᵀ where `perm[i]` is the new index of node `i`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        if perm.len() != n {
            return Err(GspError::DimensionMismatch { expected: n, found: perm.len() });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(GspError::InvalidParameter("not a permutation".into()));
            }
        }
        let mut w = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                w[(perm[i], perm[j])] = self.weights[(i, j)];
            }
        }
        Ok(Self { weights: w, ..self.clone() })
    }

    pub fn matrix(&self, kind: GraphMatrixKind) -> Result<DMatrix<T>> {
        match kind {
            GraphMatrixKind::Adjacency => Ok(self.weights.clone()),
            GraphMatrixKind::NormalizedAdjacency => normalized_adjacency(self),
            GraphMatrixKind::Laplacian => Ok(laplacian(self)),
            GraphMatrixKind::NormalizedLaplacian => normalized_laplacian(self),
            GraphMatrixKind::SymmetrizedLaplacian => Ok(symmetrized_laplacian(self)),
        }
    }
}

pub(crate) fn max_asymmetry<T: Real>(m: &DMatrix<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

fn row_sums<T: Real>(m: &DMatrix<T>) -> Vec<T> {
    m.row_iter().map(|r| r.sum()).collect()
}

/// D with D_ii = Σ_j a_ij.
pub fn degree_matrix<T: Real>(g: &WeightedGraph<T>) -> DMatrix<T> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(row_sums(&g.weights)))
}

/// L = D − A.
pub fn laplacian<T: Real>(g: &WeightedGraph<T>) -> DMatrix<T> {
    degree_matrix(g) - &g.weights
}

/// L_norm = D^(-1/2) L D^(-1/2). Fails when any degree is non-positive,
/// which negative weights can cause.
pub fn normalized_laplacian<T: Real>(g: &WeightedGraph<T>) -> Result<DMatrix<T>> {
    let degrees = row_sums(&g.weights);
    let mut inv_sqrt = Vec::with_capacity(degrees.len());
    for (node, &d) in degrees.iter().enumerate() {
        if d <= T::zero() {
            return Err(GspError::NegativeDegree { node, degree: d.as_f64() });
        }
        inv_sqrt.push(T::one() / d.sqrt());
    }
    let l = laplacian(g);
    Ok(DMatrix::from_fn(g.n(), g.n(), |i, j| inv_sqrt[i] * l[(i, j)] * inv_sqrt[j]))
}

/// L_sym = D_s − (A + Aᵀ)/2 with D_s the degrees of the symmetrised weights.
/// Always symmetric.
pub fn symmetrized_laplacian<T: Real>(g: &WeightedGraph<T>) -> DMatrix<T> {
    let half = T::of(0.5);
    let sym = (&g.weights + g.weights.transpose()) * half;
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(row_sums(&sym)));
    d - sym
}

/// A / |λ_max| with λ_max the eigenvalue of largest magnitude.
pub fn normalized_adjacency<T: Real>(g: &WeightedGraph<T>) -> Result<DMatrix<T>> {
    if !g.symmetric {
        return Err(GspError::NotSymmetric { max_asymmetry: max_asymmetry(&g.weights).as_f64() });
    }
    let radius = spectral_radius_symmetric(&g.weights);
    if radius <= T::zero_tol() {
        return Err(GspError::ZeroSpectrum);
    }
    Ok(&g.weights / radius)
}

/// Largest |λ| of a symmetric matrix.
pub fn spectral_radius_symmetric<T: Real>(m: &DMatrix<T>) -> T {
    let half = T::of(0.5);
    let sym = (m + m.transpose()) * half;
    nalgebra::SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .fold(T::zero(), |acc, l| acc.max(l.abs()))
}

/// Directed cycle on `n` nodes: (A_c)_{i, i-1 mod n} = 1. Applied to a signal
/// it moves every sample one step forward in time.
pub fn cyclic_shift<T: Real>(n: usize) -> Result<WeightedGraph<T>> {
    if n < 2 {
        return Err(GspError::InvalidParameter(format!("cyclic shift needs n >= 2, got {n}")));
    }
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        w[(i, (i + n - 1) % n)] = T::one();
    }
    WeightedGraph::new(w)
}

/// Gaussian-kernel graph on the rows of `x`: a_ij = exp(−‖x_i − x_j‖² / σ),
/// with the diagonal forced to zero.
pub fn exp_distance_graph<T: Real>(x: &MultivariateSignal<T>, sigma: T) -> Result<WeightedGraph<T>> {
    if !(sigma > T::zero()) {
        return Err(GspError::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let v = x.values();
    let n = v.nrows();
    let mut w = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2 = (v.row(i) - v.row(j)).norm_squared();
            let a = (-d2 / sigma).exp();
            w[(i, j)] = a;
            w[(j, i)] = a;
        }
    }
    WeightedGraph::new(w)
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    node_i: usize,
    node_j: usize,
    weight: f64,
}

/// Writes a symmetric graph as `node_i,node_j,weight` rows over the upper
/// triangle including the diagonal.
pub fn write_graph_csv<T: Real, W: Write>(g: &WeightedGraph<T>, out: W) -> Result<()> {
    if !g.symmetric {
        return Err(GspError::NotSymmetric { max_asymmetry: max_asymmetry(&g.weights).as_f64() });
    }
    let mut wtr = csv::Writer::from_writer(out);
    for i in 0..g.n() {
        for j in i..g.n() {
            wtr.serialize(EdgeRecord { node_i: i, node_j: j, weight: g.weights[(i, j)].as_f64() })?;
        }
    }
    wtr.flush()?;
    Ok(())
}

/// Reads the format produced by [`write_graph_csv`]; missing pairs are zero.
pub fn read_graph_csv<T: Real, R: Read>(input: R) -> Result<WeightedGraph<T>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["node_i", "node_j", "weight"] {
        return Err(GspError::Parse(format!("unexpected graph header {headers:?}")));
    }
    let records: Vec<EdgeRecord> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    let n = records.iter().map(|r| r.node_i.max(r.node_j) + 1).max().unwrap_or(0);
    let mut w = DMatrix::<T>::zeros(n, n);
    let mut seen = DMatrix::from_element(n, n, false);
    for r in &records {
        let v = T::of(r.weight);
        let (i, j) = (r.node_i, r.node_j);
        // Both orientations listed with different weights: not an undirected graph.
        if seen[(i, j)] && w[(i, j)] != v {
            return Err(GspError::NotSymmetric { max_asymmetry: (w[(i, j)] - v).abs().as_f64() });
        }
        seen[(i, j)] = true;
        seen[(j, i)] = true;
        w[(i, j)] = v;
        w[(j, i)] = v;
    }
    WeightedGraph::new(w)
}
