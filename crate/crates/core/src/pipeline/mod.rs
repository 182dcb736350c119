//! Graph-frequency classification experiment: training graph, graph Fourier
//! bases (main and baselines), band features, per-frequency classifiers and
//! perpetual cross-validation.

pub mod classifier;
pub mod cv;
pub mod features;
pub mod results;

pub use classifier::{train_classifier, LinearRule, SvmParams};
pub use cv::{perpetual_cv, run_experiment, CvConfig, ExperimentSettings, ModelIterations, SimParams};
pub use features::{psd_features, welch_psd, FeatureVector, Welch, WelchConfig};
pub use results::{AccuracyRecord, ExperimentResult};

use crate::error::{GspError, Result};
use crate::graph::WeightedGraph;
use crate::rng;
use crate::simulator::{random_structural_graph, LabelledSample};
use crate::spectral::{gft_basis, GftKind, GraphFourierBasis};
use crate::variation::pearson_matrix;
use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    Main,
    PermutedNodes,
    RandomGraph,
    SingleChannel,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] =
        [BaselineKind::Main, BaselineKind::PermutedNodes, BaselineKind::RandomGraph, BaselineKind::SingleChannel];

    pub fn as_str(self) -> &'static str {
        match self {
            BaselineKind::Main => "main",
            BaselineKind::PermutedNodes => "permuted_nodes",
            BaselineKind::RandomGraph => "random_graph",
            BaselineKind::SingleChannel => "single_channel",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BaselineKind {
    type Err = GspError;

    fn from_str(s: &str) -> Result<Self> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s.trim())
            .ok_or_else(|| GspError::Parse(format!("unknown model '{s}'")))
    }
}

/// Mean of Pearson matrices, diagonal set to zero.
pub fn mean_correlation_graph<'a, I>(pearsons: I) -> Result<WeightedGraph<f64>>
where
    I: IntoIterator<Item = &'a DMatrix<f64>>,
{
    let mut it = pearsons.into_iter();
    let first = it.next().ok_or(GspError::EmptyTrainingSet)?;
    let mut acc = first.clone();
    let mut count = 1usize;
    for m in it {
        if m.shape() != acc.shape() {
            return Err(GspError::DimensionMismatch { expected: acc.nrows(), found: m.nrows() });
        }
        acc += m;
        count += 1;
    }
    acc /= count as f64;
    acc.fill_diagonal(0.0);
    WeightedGraph::new(acc)
}

/// Average of the per-sample correlation graphs of the training samples.
pub fn training_graph(train: &[LabelledSample]) -> Result<WeightedGraph<f64>> {
    let ms: Vec<DMatrix<f64>> = train.iter().map(|s| pearson_matrix(&s.signal)).collect::<Result<_>>()?;
    mean_correlation_graph(ms.iter())
}

/// Graph Fourier basis of a model. `rng` is only consumed by the permuted and
/// random-graph baselines.
pub fn baseline_basis<R: Rng>(
    kind: BaselineKind,
    graph: &WeightedGraph<f64>,
    gft_kind: GftKind,
    rng: &mut R,
) -> Result<GraphFourierBasis<f64>> {
    let n = graph.n();
    match kind {
        BaselineKind::Main => gft_basis(graph, gft_kind, gft_kind.default_source()),
        BaselineKind::PermutedNodes => {
            let perm = rng::permutation(rng, n);
            gft_basis(&graph.permuted(&perm)?, gft_kind, gft_kind.default_source())
        }
        BaselineKind::RandomGraph => {
            let g = random_structural_graph(n, rng)?;
            gft_basis(&g, gft_kind, gft_kind.default_source())
        }
        BaselineKind::SingleChannel => Ok(GraphFourierBasis::identity(n, gft_kind)),
    }
}
