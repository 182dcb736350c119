//! Graph signal processing toolkit.
//!
//! * [`graph`]: weighted graphs and their shift-operator matrices
//! * [`spectral`]: graph Fourier bases (adjacency and Laplacian), DFT, PCA
//! * [`variation`]: node/edge total variation and the correlation-graph learner
//! * [`filters`]: convolution, polynomial filters and wavelets
//! * [`simulator`]: synthetic multichannel signals with controlled spatial and
//!   spectral structure
//! * [`pipeline`]: the graph-frequency classification experiment
//!
//! The linear-algebra modules are generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`, which the experiment uses.

pub mod error;
pub mod filters;
pub mod graph;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod signal;
pub mod simulator;
pub mod spectral;
pub mod variation;

pub use error::{GspError, Result};
pub use graph::{GraphMatrixKind, WeightedGraph};
pub use scalar::Real;
pub use signal::MultivariateSignal;
pub use spectral::{GftKind, GraphFourierBasis};

pub type Graph = WeightedGraph<f64>;
pub type Graph32 = WeightedGraph<f32>;
pub type Signal = MultivariateSignal<f64>;
pub type Signal32 = MultivariateSignal<f32>;
pub type Basis = GraphFourierBasis<f64>;
pub type Basis32 = GraphFourierBasis<f32>;
