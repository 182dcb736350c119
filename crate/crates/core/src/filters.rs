//! Convolution, polynomial graph filters and wavelets.

use crate::error::{GspError, Result};
use crate::graph::{cyclic_shift, laplacian, max_asymmetry, GraphMatrixKind, WeightedGraph};
use crate::scalar::Real;
use crate::signal::MultivariateSignal;
use crate::spectral::{dft_matrix, gft_basis, GftKind, GraphFourierBasis};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

#[derive(Debug, Clone, PartialEq)]
pub enum FilterRepresentation<T: Real> {
    /// Impulse-response coefficients p_0..p_{n-1} of Σ p_i M^i.
    VertexCoefficients(Vec<T>),
    /// Frequency response h_0..h_{n-1}, one value per mode in frequency order.
    SpectralResponse(Vec<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterSpec<T: Real> {
    pub representation: FilterRepresentation<T>,
    /// Chooses M = A (adjacency-based) or M = L (Laplacian-based).
    pub basis_kind: GftKind,
}

impl<T: Real> FilterSpec<T> {
    pub fn vertex(p: Vec<T>, basis_kind: GftKind) -> Self {
        Self { representation: FilterRepresentation::VertexCoefficients(p), basis_kind }
    }

    pub fn spectral(h: Vec<T>, basis_kind: GftKind) -> Self {
        Self { representation: FilterRepresentation::SpectralResponse(h), basis_kind }
    }
}

/// Zero-pads `p` to length `n`; longer inputs are rejected.
pub fn pad_coefficients<T: Real>(p: &[T], n: usize) -> Result<Vec<T>> {
    if p.len() > n {
        return Err(GspError::LengthMismatch { left: p.len(), right: n });
    }
    let mut out = p.to_vec();
    out.resize(n, T::zero());
    Ok(out)
}

/// Σ_i p_i M^i with powers built incrementally.
pub fn matrix_polynomial<T: Real>(m: &DMatrix<T>, p: &[T]) -> DMatrix<T> {
    let n = m.nrows();
    let mut acc = DMatrix::zeros(n, n);
    let mut power = DMatrix::identity(n, n);
    for (i, &c) in p.iter().enumerate() {
        if c != T::zero() {
            acc += &power * c;
        }
        if i + 1 < p.len() {
            power = m * power;
        }
    }
    acc
}

/// (Σ_i p_i M^i) x without forming the matrix.
fn polynomial_apply<T: Real>(m: &DMatrix<T>, p: &[T], x: &DVector<T>) -> DVector<T> {
    let mut acc = DVector::zeros(x.len());
    let mut shifted = x.clone();
    for (i, &c) in p.iter().enumerate() {
        acc += &shifted * c;
        if i + 1 < p.len() {
            shifted = m * shifted;
        }
    }
    acc
}

fn operator<T: Real>(g: &WeightedGraph<T>, kind: GftKind) -> DMatrix<T> {
    match kind {
        GftKind::AdjacencyBased => g.weights().clone(),
        GftKind::LaplacianBased => laplacian(g),
    }
}

fn require_symmetric<T: Real>(g: &WeightedGraph<T>) -> Result<()> {
    if !g.is_symmetric() {
        return Err(GspError::NotSymmetric { max_asymmetry: max_asymmetry(g.weights()).as_f64() });
    }
    Ok(())
}

/// Circular convolution as a polynomial in the cyclic shift: (Σ_i r_i A_c^i) s.
pub fn cyclic_convolve<T: Real>(s: &DVector<T>, r: &DVector<T>) -> Result<DVector<T>> {
    if s.len() != r.len() {
        return Err(GspError::LengthMismatch { left: s.len(), right: r.len() });
    }
    let n = s.len();
    if n == 1 {
        return Ok(s * r[0]);
    }
    let ac = cyclic_shift::<T>(n)?;
    Ok(polynomial_apply(ac.weights(), r.as_slice(), s))
}

/// Circular convolution through the unitary DFT:
/// DFT⁻¹ [√N (DFT r) ∘ (DFT s)].
pub fn cyclic_convolve_dft<T: Real>(s: &DVector<T>, r: &DVector<T>) -> Result<DVector<T>> {
    if s.len() != r.len() {
        return Err(GspError::LengthMismatch { left: s.len(), right: r.len() });
    }
    let n = s.len();
    let dft = dft_matrix::<T>(n)?;
    let to_c = |v: &DVector<T>| v.map(|x| Complex::new(x, T::zero()));
    let fs = &dft * to_c(s);
    let fr = &dft * to_c(r);
    let scale = Complex::new(T::of_usize(n).sqrt(), T::zero());
    let prod = fs.zip_map(&fr, |a, b| a * b * scale);
    Ok((dft.adjoint() * prod).map(|z| z.re))
}

/// Graph convolution x * y = (Σ_i y_i A^i) x.
pub fn graph_convolve<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>, y: &DVector<T>) -> Result<DVector<T>> {
    check_lengths(g, x, y)?;
    Ok(polynomial_apply(g.weights(), y.as_slice(), x))
}

/// The same convolution evaluated in the adjacency spectral domain:
/// modes · diag(Σ_i y_i λ_k^i) · modesᵀ x.
pub fn graph_convolve_spectral<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>, y: &DVector<T>) -> Result<DVector<T>> {
    check_lengths(g, x, y)?;
    let basis = gft_basis(g, GftKind::AdjacencyBased, GraphMatrixKind::Adjacency)?;
    let h = poly_to_spectral(y.as_slice(), basis.eigenvalues());
    Ok(spectral_apply(&basis, &h, x))
}

/// Convolution with L in place of the shift operator, (Σ_i y_i L^i) x.
///
/// Defined only by analogy with the adjacency form; L is a difference
/// operator, not a shift.
pub fn graph_convolve_laplacian<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>, y: &DVector<T>) -> Result<DVector<T>> {
    check_lengths(g, x, y)?;
    Ok(polynomial_apply(&laplacian(g), y.as_slice(), x))
}

fn check_lengths<T: Real>(g: &WeightedGraph<T>, x: &DVector<T>, y: &DVector<T>) -> Result<()> {
    for v in [x, y] {
        if v.len() != g.n() {
            return Err(GspError::DimensionMismatch { expected: g.n(), found: v.len() });
        }
    }
    Ok(())
}

fn spectral_apply<T: Real>(basis: &GraphFourierBasis<T>, h: &DVector<T>, x: &DVector<T>) -> DVector<T> {
    let xt = basis.modes().tr_mul(x).component_mul(h);
    basis.modes() * xt
}

/// h_k = Σ_i p_i λ_k^i.
pub fn poly_to_spectral<T: Real>(p: &[T], eigenvalues: &DVector<T>) -> DVector<T> {
    eigenvalues.map(|lambda| {
        let mut power = T::one();
        let mut acc = T::zero();
        for &c in p {
            acc += c * power;
            power *= lambda;
        }
        acc
    })
}

/// The n×n matrix H of a filter on `g`.
pub fn filter_matrix<T: Real>(g: &WeightedGraph<T>, spec: &FilterSpec<T>) -> Result<DMatrix<T>> {
    require_symmetric(g)?;
    let n = g.n();
    match &spec.representation {
        FilterRepresentation::VertexCoefficients(p) => {
            let p = pad_coefficients(p, n)?;
            Ok(matrix_polynomial(&operator(g, spec.basis_kind), &p))
        }
        FilterRepresentation::SpectralResponse(h) => {
            let h = DVector::from_vec(pad_coefficients(h, n)?);
            let basis = gft_basis(g, spec.basis_kind, spec.basis_kind.default_source())?;
            let q = basis.modes();
            Ok(q * DMatrix::from_diagonal(&h) * q.transpose())
        }
    }
}

/// H X for every column of `x`.
pub fn apply_filter<T: Real>(
    g: &WeightedGraph<T>,
    spec: &FilterSpec<T>,
    x: &MultivariateSignal<T>,
) -> Result<MultivariateSignal<T>> {
    if x.n_channels() != g.n() {
        return Err(GspError::DimensionMismatch { expected: g.n(), found: x.n_channels() });
    }
    let h = filter_matrix(g, spec)?;
    MultivariateSignal::new(h * x.values())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletDirection {
    /// Suppression s^k, distance measured backwards in time only.
    Unidirectional,
    /// Suppression s^(N/2 − |k − N/2|), distance measured to either side.
    Bidirectional,
}

/// Classical wavelet on a periodic signal of length `n` located at `tau`:
/// (Σ_k p̃_k A_c^k) δ_τ with the scale folded into p̃.
pub fn classical_wavelet<T: Real>(
    n: usize,
    tau: usize,
    p: &[T],
    s: T,
    direction: WaveletDirection,
) -> Result<DVector<T>> {
    if !(s > T::zero() && s < T::one()) {
        return Err(GspError::ScaleOutOfRange(s.as_f64()));
    }
    if tau >= n {
        return Err(GspError::InvalidParameter(format!("tau {tau} outside 0..{n}")));
    }
    let p = pad_coefficients(p, n)?;
    let half = T::of_usize(n) / T::of(2.0);
    let scaled: Vec<T> = p
        .iter()
        .enumerate()
        .map(|(k, &pk)| {
            let kk = T::of_usize(k);
            let exponent = match direction {
                WaveletDirection::Unidirectional => kk,
                WaveletDirection::Bidirectional => half - (kk - half).abs(),
            };
            pk * s.powf(exponent)
        })
        .collect();
    let ac = cyclic_shift::<T>(n)?;
    let mut delta = DVector::zeros(n);
    delta[tau] = T::one();
    Ok(polynomial_apply(ac.weights(), &scaled, &delta))
}

/// Graph wavelet at node `nu`: h(sM) δ_ν = (Σ_k p_k s^k M^k) δ_ν with M = A
/// or L depending on `basis_kind`.
pub fn graph_wavelet<T: Real>(
    g: &WeightedGraph<T>,
    nu: usize,
    p: &[T],
    s: T,
    basis_kind: GftKind,
) -> Result<DVector<T>> {
    require_symmetric(g)?;
    if nu >= g.n() {
        return Err(GspError::DimensionMismatch { expected: g.n(), found: nu + 1 });
    }
    if !(s > T::zero()) {
        return Err(GspError::ScaleOutOfRange(s.as_f64()));
    }
    let scaled = scaled_coefficients(&pad_coefficients(p, g.n())?, s);
    let mut delta = DVector::zeros(g.n());
    delta[nu] = T::one();
    Ok(polynomial_apply(&operator(g, basis_kind), &scaled, &delta))
}

/// p̃_k = p_k s^k.
pub fn scaled_coefficients<T: Real>(p: &[T], s: T) -> Vec<T> {
    let mut power = T::one();
    p.iter()
        .map(|&c| {
            let v = c * power;
            power *= s;
            v
        })
        .collect()
}
