//! Perpetual cross-validation and the experiment driver.

use super::classifier::{correct_count, train_classifier, LinearRule, SvmParams};
use super::features::{basis_features, Welch, WelchConfig};
use super::results::{AccuracyRecord, ExperimentResult};
use super::{baseline_basis, mean_correlation_graph, BaselineKind};
use crate::error::{GspError, Result};
use crate::rng::{self, DrawKind};
use crate::simulator::{
    condition_profiles, generate_fold, structural_graph, Difficulty, LabelledSample, ProfileFamily, SimConfig,
    SpectralProfile,
};
use crate::spectral::{GftKind, GraphFourierBasis};
use crate::variation::pearson_matrix;
use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

/// Number of CV iterations evaluated for each model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelIterations {
    pub main: usize,
    pub permuted_nodes: usize,
    pub random_graph: usize,
    pub single_channel: usize,
}

impl ModelIterations {
    pub fn uniform(n: usize) -> Self {
        Self { main: n, permuted_nodes: n, random_graph: n, single_channel: n }
    }

    pub fn get(&self, kind: BaselineKind) -> usize {
        match kind {
            BaselineKind::Main => self.main,
            BaselineKind::PermutedNodes => self.permuted_nodes,
            BaselineKind::RandomGraph => self.random_graph,
            BaselineKind::SingleChannel => self.single_channel,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvConfig {
    /// Folds in the initial data set.
    pub k: usize,
    pub initial_samples: usize,
    pub iterations: ModelIterations,
    pub models: Vec<BaselineKind>,
    pub gft_kinds: Vec<GftKind>,
    /// Draw the baseline permutation and random graph once instead of per
    /// iteration.
    pub freeze_baseline: bool,
    pub svm: SvmParams,
    pub welch: WelchConfig,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            k: 10,
            initial_samples: 100,
            iterations: ModelIterations::uniform(50),
            models: BaselineKind::ALL.to_vec(),
            gft_kinds: vec![GftKind::AdjacencyBased, GftKind::LaplacianBased],
            freeze_baseline: false,
            svm: SvmParams::default(),
            welch: WelchConfig::default(),
        }
    }
}

impl CvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(GspError::InvalidConfig(format!("k = {} < 2", self.k)));
        }
        if self.initial_samples == 0 || self.initial_samples % self.k != 0 {
            return Err(GspError::InvalidConfig(format!(
                "initial_samples {} must be a positive multiple of k = {}",
                self.initial_samples, self.k
            )));
        }
        if self.fold_size() % 2 != 0 {
            return Err(GspError::InvalidConfig(format!("fold size {} must be even", self.fold_size())));
        }
        if self.models.is_empty() || self.gft_kinds.is_empty() {
            return Err(GspError::InvalidConfig("need at least one model and one gft kind".into()));
        }
        if self.models.iter().any(|&m| self.iterations.get(m) == 0) {
            return Err(GspError::InvalidConfig("every selected model needs ≥ 1 iteration".into()));
        }
        self.svm.validate()?;
        self.welch.validate()
    }

    pub fn fold_size(&self) -> usize {
        self.initial_samples / self.k
    }

    pub fn max_iterations(&self) -> usize {
        self.models.iter().map(|&m| self.iterations.get(m)).max().unwrap_or(0)
    }

    /// Training-set size at 1-based iteration `i`.
    pub fn train_size(&self, i: usize) -> usize {
        self.fold_size() * (self.k - 1 + (i - 1))
    }
}

/// What the CV loop keeps of each sample: its correlation matrix and its band
/// cross-spectra. The raw signal is dropped after summarising.
#[derive(Debug, Clone)]
pub struct SampleSummary {
    pub sample_id: u64,
    pub condition: u8,
    pub pearson: DMatrix<f64>,
    pub bands: Vec<DMatrix<f64>>,
}

impl SampleSummary {
    pub fn new(sample: &LabelledSample, welch: &Welch) -> Result<Self> {
        Ok(Self {
            sample_id: sample.sample_id,
            condition: sample.condition,
            pearson: pearson_matrix(&sample.signal)?,
            bands: welch.band_cross_spectra(&sample.signal)?,
        })
    }
}

/// Per-frequency classifiers of one model on one training split.
#[derive(Debug, Clone)]
pub struct FittedModel {
    pub basis: GraphFourierBasis<f64>,
    pub rules: Vec<LinearRule>,
}

impl FittedModel {
    pub fn fit(basis: GraphFourierBasis<f64>, train: &[&SampleSummary], svm: &SvmParams) -> Result<Self> {
        let feats: Vec<Vec<Vec<f64>>> = train.iter().map(|s| basis_features(&basis, &s.bands)).collect();
        let labels: Vec<u8> = train.iter().map(|s| s.condition).collect();
        let rules = (0..basis.dim())
            .map(|k| {
                let fk: Vec<Vec<f64>> = feats.iter().map(|f| f[k].clone()).collect();
                train_classifier(&fk, &labels, svm)
            })
            .collect::<Result<_>>()?;
        Ok(Self { basis, rules })
    }

    /// Correct predictions per frequency.
    pub fn evaluate(&self, test: &[&SampleSummary]) -> Vec<usize> {
        let feats: Vec<Vec<Vec<f64>>> = test.iter().map(|s| basis_features(&self.basis, &s.bands)).collect();
        let labels: Vec<u8> = test.iter().map(|s| s.condition).collect();
        (0..self.rules.len())
            .map(|k| {
                let fk: Vec<Vec<f64>> = feats.iter().map(|f| f[k].clone()).collect();
                correct_count(&self.rules[k], &fk, &labels)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    correct: Vec<usize>,
    n_test: usize,
    eigen_sum: Vec<f64>,
}

impl Tally {
    fn add(&mut self, correct: &[usize], n_test: usize, eigenvalues: &[f64]) {
        if self.correct.is_empty() {
            self.correct = vec![0; correct.len()];
            self.eigen_sum = vec![0.0; eigenvalues.len()];
        }
        self.correct.iter_mut().zip(correct).for_each(|(a, b)| *a += b);
        self.eigen_sum.iter_mut().zip(eigenvalues).for_each(|(a, b)| *a += b);
        self.n_test += n_test;
    }
}

type CurveKey = (BaselineKind, GftKind);

/// One CV iteration (1-based `i`) over `folds`: test on fold i−1, train on
/// every other fold present.
fn run_iteration(
    i: usize,
    folds: &[Vec<SampleSummary>],
    cv: &CvConfig,
    seed: u64,
) -> Result<Vec<(CurveKey, Vec<usize>, usize, Vec<f64>)>> {
    let n_folds = cv.k + i - 1;
    let test: Vec<&SampleSummary> = folds[i - 1].iter().collect();
    let train: Vec<&SampleSummary> =
        folds[..n_folds].iter().enumerate().filter(|(f, _)| *f != i - 1).flat_map(|(_, s)| s.iter()).collect();
    let graph = mean_correlation_graph(train.iter().map(|s| &s.pearson))?;
    let draw = if cv.freeze_baseline { 0 } else { i as u64 };
    let mut out = Vec::new();
    for &model in &cv.models {
        if i > cv.iterations.get(model) {
            continue;
        }
        let mut single: Option<(Vec<usize>, Vec<f64>)> = None;
        for &kind in &cv.gft_kinds {
            if model == BaselineKind::SingleChannel {
                if let Some((c, e)) = &single {
                    out.push(((model, kind), c.clone(), test.len(), e.clone()));
                    continue;
                }
            }
            // Same draw for both gft kinds so their curves are paired.
            let draw_kind = if model == BaselineKind::RandomGraph { DrawKind::RandomGraph } else { DrawKind::Permutation };
            let mut r = rng::stream(seed, draw, 0, draw_kind);
            let basis = baseline_basis(model, &graph, kind, &mut r)?;
            let eig: Vec<f64> = basis.eigenvalues().iter().copied().collect();
            let fitted = FittedModel::fit(basis, &train, &cv.svm)?;
            let correct = fitted.evaluate(&test);
            if model == BaselineKind::SingleChannel {
                single = Some((correct.clone(), eig.clone()));
            }
            out.push(((model, kind), correct, test.len(), eig));
        }
    }
    Ok(out)
}

/// Perpetual cross-validation for one difficulty. Returns one record per
/// (model, gft kind, frequency).
pub fn perpetual_cv(
    sim: &SimConfig,
    profiles: (&SpectralProfile, &SpectralProfile),
    cv: &CvConfig,
    difficulty: Difficulty,
) -> Result<ExperimentResult> {
    cv.validate()?;
    sim.validate()?;
    let welch = Welch::new(cv.welch)?;
    let n_iter = cv.max_iterations();
    let n_folds = cv.k + n_iter - 1;
    let fs = cv.fold_size();
    let folds: Vec<Vec<SampleSummary>> = (0..n_folds)
        .map(|f| {
            let samples = generate_fold(sim, fs, profiles, (f * fs) as u64)?;
            samples.par_iter().map(|s| SampleSummary::new(s, &welch)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let per_iter: Vec<_> =
        (1..=n_iter).into_par_iter().map(|i| run_iteration(i, &folds, cv, sim.seed)).collect::<Result<_>>()?;

    let mut tallies: BTreeMap<CurveKey, Tally> = BTreeMap::new();
    for outcome in per_iter {
        for (key, correct, n_test, eig) in outcome {
            tallies.entry(key).or_default().add(&correct, n_test, &eig);
        }
    }

    let mut records = Vec::new();
    for &model in &cv.models {
        for &kind in &cv.gft_kinds {
            let Some(t) = tallies.get(&(model, kind)) else { continue };
            let iters = cv.iterations.get(model).min(n_iter) as f64;
            for (idx, &correct) in t.correct.iter().enumerate() {
                records.push(AccuracyRecord {
                    difficulty,
                    model,
                    gft_kind: kind,
                    graph_frequency_index: idx,
                    eigenvalue: (model != BaselineKind::SingleChannel).then(|| t.eigen_sum[idx] / iters),
                    correct,
                    n_test: t.n_test,
                });
            }
        }
    }
    Ok(ExperimentResult { records })
}

/// Simulation parameters shared by every condition and difficulty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimParams {
    pub n_channels: usize,
    pub n_time: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sample_rate: f64,
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self { n_channels: 23, n_time: 2048, alpha: 0.5, beta: 1.0, gamma: 1.0, sample_rate: 256.0, seed: 0 }
    }
}

impl SimParams {
    /// Full simulator configuration; the structural graph is drawn from the
    /// seed.
    pub fn to_config(&self, profile: SpectralProfile) -> Result<SimConfig> {
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return Err(GspError::InvalidConfig(format!("sample_rate {}", self.sample_rate)));
        }
        let cfg = SimConfig {
            n_channels: self.n_channels,
            n_time: self.n_time,
            structural_graph: structural_graph(self.n_channels.max(2), self.seed)?,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            profile,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings {
    pub sim: SimParams,
    pub family: ProfileFamily,
    pub cv: CvConfig,
}

impl ExperimentSettings {
    pub fn validate(&self) -> Result<()> {
        self.family.validate()?;
        self.cv.validate()?;
        if (self.cv.welch.sample_rate - self.sim.sample_rate).abs() > 0.0 {
            return Err(GspError::InvalidConfig("welch and simulation sample rates differ".into()));
        }
        if self.sim.n_time < self.cv.welch.segment_len {
            return Err(GspError::InvalidConfig(format!(
                "n_time {} shorter than the Welch segment {}",
                self.sim.n_time, self.cv.welch.segment_len
            )));
        }
        self.sim.to_config(SpectralProfile::flat(self.sim.sample_rate)).map(|_| ())
    }

    pub fn run_difficulty(&self, difficulty: Difficulty) -> Result<ExperimentResult> {
        let (h1, h2) = condition_profiles(&self.family, difficulty, self.sim.sample_rate)?;
        let sim = self.sim.to_config(h1.clone())?;
        perpetual_cv(&sim, (&h1, &h2), &self.cv, difficulty)
    }
}

/// Runs every difficulty and writes `results.csv` into `output_dir`.
pub fn run_experiment(
    settings: &ExperimentSettings,
    difficulties: &[Difficulty],
    output_dir: &Path,
) -> Result<ExperimentResult> {
    settings.validate()?;
    let mut all = ExperimentResult::default();
    for &d in difficulties {
        all.extend(settings.run_difficulty(d)?);
    }
    fs::create_dir_all(output_dir)?;
    all.write_csv(fs::File::create(output_dir.join("results.csv"))?)?;
    Ok(all)
}
