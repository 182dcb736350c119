//! Synthetic multichannel signals with a controlled spatial graph and a
//! controlled power-spectral profile.

use crate::error::{GspError, Result};
use crate::graph::WeightedGraph;
use crate::rng::{self, DrawKind};
use crate::signal::MultivariateSignal;
use crate::spectral::eigendecompose_symmetric;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::Arc;

/// Frequency response stored as a table over non-negative frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    sample_rate: f64,
    freqs: Vec<f64>,
    response: Vec<f64>,
}

impl SpectralProfile {
    /// `freqs` must be strictly increasing and start at 0.
    pub fn new(sample_rate: f64, freqs: Vec<f64>, response: Vec<f64>) -> Result<Self> {
        if !(sample_rate > 0.0 && sample_rate.is_finite()) {
            return Err(GspError::InvalidParameter(format!("sample rate {sample_rate}")));
        }
        if freqs.len() != response.len() {
            return Err(GspError::LengthMismatch { left: freqs.len(), right: response.len() });
        }
        if freqs.len() < 2 || freqs[0] != 0.0 || freqs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(GspError::InvalidParameter("profile frequencies must start at 0 and increase".into()));
        }
        if response.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(GspError::InvalidParameter("profile response must be finite and non-negative".into()));
        }
        Ok(Self { sample_rate, freqs, response })
    }

    /// Tabulates `f` on `n_points` evenly spaced frequencies over [0, fs/2].
    pub fn from_fn(sample_rate: f64, n_points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let nyquist = sample_rate / 2.0;
        let freqs: Vec<f64> = (0..n_points).map(|i| nyquist * i as f64 / (n_points - 1) as f64).collect();
        let response = freqs.iter().map(|&x| f(x)).collect();
        Self::new(sample_rate, freqs, response)
    }

    pub fn flat(sample_rate: f64) -> Self {
        Self::new(sample_rate, vec![0.0, sample_rate / 2.0], vec![1.0, 1.0]).expect("valid flat profile")
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    /// Linear interpolation, clamped at the ends of the table.
    pub fn at(&self, f: f64) -> f64 {
        let f = f.abs();
        let last = self.freqs.len() - 1;
        if f >= self.freqs[last] {
            return self.response[last];
        }
        let j = self.freqs.partition_point(|&x| x <= f) - 1;
        let (f0, f1) = (self.freqs[j], self.freqs[j + 1]);
        let w = (f - f0) / (f1 - f0);
        self.response[j] * (1.0 - w) + self.response[j + 1] * w
    }

    /// Response on the `n_time`-point FFT grid; bin k and bin n−k share a value.
    pub fn render(&self, n_time: usize) -> Vec<f64> {
        (0..n_time)
            .map(|k| self.at(k.min(n_time - k) as f64 * self.sample_rate / n_time as f64))
            .collect()
    }

    pub fn peak_frequency(&self) -> f64 {
        let i = self
            .response
            .iter()
            .enumerate()
            .fold(0, |best, (i, v)| if *v > self.response[best] { i } else { best });
        self.freqs[i]
    }

    /// L2 distance between the tables, evaluated on the union of grids.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut grid: Vec<f64> = self.freqs.iter().chain(other.freqs.iter()).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        grid.iter().map(|&f| (self.at(f) - other.at(f)).powi(2)).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Difficulty {
    Easy,
    Medium,
    Difficult,
}

impl Difficulty {
    pub const ALL: [Difficulty; 3] = [Difficulty::Easy, Difficulty::Medium, Difficulty::Difficult];

    pub fn as_str(self) -> &'static str {
        match self {
            Difficulty::Easy => "easy",
            Difficulty::Medium => "medium",
            Difficulty::Difficult => "difficult",
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Difficulty {
    type Err = GspError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "easy" => Ok(Difficulty::Easy),
            "medium" => Ok(Difficulty::Medium),
            "difficult" | "hard" => Ok(Difficulty::Difficult),
            other => Err(GspError::Parse(format!("unknown difficulty '{other}'"))),
        }
    }
}

/// h(f) = a·exp(−(f−f₀)²/(2w²)) + b/(1 + f/f_r). Condition 2 moves f₀ by a
/// difficulty-dependent shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFamily {
    pub peak_hz: f64,
    pub width_hz: f64,
    pub amplitude: f64,
    pub floor: f64,
    pub rolloff_hz: f64,
    pub shift_easy_hz: f64,
    pub shift_medium_hz: f64,
    pub shift_difficult_hz: f64,
}

impl Default for ProfileFamily {
    fn default() -> Self {
        Self {
            peak_hz: 10.0,
            width_hz: 3.0,
            amplitude: 1.0,
            floor: 0.5,
            rolloff_hz: 20.0,
            shift_easy_hz: 1.0,
            shift_medium_hz: 0.5,
            shift_difficult_hz: 0.25,
        }
    }
}

/// Table points per profile; 1/32 Hz spacing at 256 Hz.
const PROFILE_TABLE_POINTS: usize = 4097;

impl ProfileFamily {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.peak_hz,
            self.width_hz,
            self.amplitude,
            self.floor,
            self.rolloff_hz,
            self.shift_easy_hz,
            self.shift_medium_hz,
            self.shift_difficult_hz,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(GspError::InvalidConfig("profile constants must be finite".into()));
        }
        if self.width_hz <= 0.0 || self.rolloff_hz <= 0.0 || self.amplitude < 0.0 || self.floor < 0.0 {
            return Err(GspError::InvalidConfig(
                "profile needs width > 0, rolloff > 0, amplitude ≥ 0, floor ≥ 0".into(),
            ));
        }
        let s = [self.shift_easy_hz.abs(), self.shift_medium_hz.abs(), self.shift_difficult_hz.abs()];
        if !(s[0] > s[1] && s[1] > s[2] && s[2] > 0.0) {
            return Err(GspError::InvalidConfig("shifts must satisfy |easy| > |medium| > |difficult| > 0".into()));
        }
        if self.amplitude == 0.0 {
            return Err(GspError::InvalidConfig("amplitude 0 makes both conditions identical".into()));
        }
        Ok(())
    }

    pub fn shift(&self, difficulty: Difficulty) -> f64 {
        match difficulty {
            Difficulty::Easy => self.shift_easy_hz,
            Difficulty::Medium => self.shift_medium_hz,
            Difficulty::Difficult => self.shift_difficult_hz,
        }
    }

    pub fn evaluate(&self, f: f64, peak_hz: f64) -> f64 {
        let d = f - peak_hz;
        self.amplitude * (-d * d / (2.0 * self.width_hz * self.width_hz)).exp() + self.floor / (1.0 + f / self.rolloff_hz)
    }

    pub fn profile(&self, peak_hz: f64, sample_rate: f64) -> Result<SpectralProfile> {
        SpectralProfile::from_fn(sample_rate, PROFILE_TABLE_POINTS, |f| self.evaluate(f, peak_hz))
    }
}

/// (h1, h2) for a difficulty. h1 is the same for every difficulty.
pub fn condition_profiles(
    family: &ProfileFamily,
    difficulty: Difficulty,
    sample_rate: f64,
) -> Result<(SpectralProfile, SpectralProfile)> {
    family.validate()?;
    let h1 = family.profile(family.peak_hz, sample_rate)?;
    let h2 = family.profile(family.peak_hz + family.shift(difficulty), sample_rate)?;
    Ok((h1, h2))
}

/// Filters white noise through a fixed response; FFT plans are built once.
#[derive(Clone)]
pub struct ColouredNoise {
    response: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for ColouredNoise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColouredNoise").field("n_time", &self.response.len()).finish()
    }
}

impl ColouredNoise {
    pub fn new(profile: &SpectralProfile, n_time: usize) -> Result<Self> {
        if n_time < 2 {
            return Err(GspError::InvalidParameter(format!("n_time {n_time} < 2")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            response: profile.render(n_time),
            forward: planner.plan_fft_forward(n_time),
            inverse: planner.plan_fft_inverse(n_time),
        })
    }

    pub fn n_time(&self) -> usize {
        self.response.len()
    }

    /// White normal draw, shaped by the response, then normalised to mean 0
    /// and sd 1.
    pub fn draw<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let white = rng::normals(rng, self.n_time());
        self.shape(&white)
    }

    pub fn shape(&self, white: &[f64]) -> Vec<f64> {
        let n = self.n_time();
        let mut buf: Vec<Complex<f64>> = white.iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        for (z, h) in buf.iter_mut().zip(&self.response) {
            *z *= *h;
        }
        self.inverse.process(&mut buf);
        let y: Vec<f64> = buf.iter().map(|z| z.re / n as f64).collect();
        normalize(y)
    }
}

fn normalize(mut y: Vec<f64>) -> Vec<f64> {
    let n = y.len() as f64;
    let mean = y.iter().sum::<f64>() / n;
    y.iter_mut().for_each(|v| *v -= mean);
    let sd = (y.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if sd > 0.0 {
        y.iter_mut().for_each(|v| *v /= sd);
    }
    y
}

/// One coloured-noise draw for a profile.
pub fn coloured_noise<R: Rng>(profile: &SpectralProfile, n_time: usize, rng: &mut R) -> Result<Vec<f64>> {
    Ok(ColouredNoise::new(profile, n_time)?.draw(rng))
}

pub const STRUCTURAL_LOW: f64 = -0.1;
pub const STRUCTURAL_HIGH: f64 = 0.4;
pub const STRUCTURAL_DIAGONAL: f64 = 0.4;

/// Symmetric graph with off-diagonals U[−0.1, 0.4] and diagonal 0.4.
pub fn random_structural_graph<R: Rng>(n_channels: usize, rng: &mut R) -> Result<WeightedGraph<f64>> {
    if n_channels < 2 {
        return Err(GspError::InvalidParameter(format!("n_channels {n_channels} < 2")));
    }
    let mut a = DMatrix::from_element(n_channels, n_channels, 0.0);
    for i in 0..n_channels {
        a[(i, i)] = STRUCTURAL_DIAGONAL;
        for j in 0..i {
            let v = rng::uniform(rng, STRUCTURAL_LOW, STRUCTURAL_HIGH);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    WeightedGraph::new(a)
}

/// The structural graph of an experiment, keyed by its seed.
pub fn structural_graph(n_channels: usize, seed: u64) -> Result<WeightedGraph<f64>> {
    random_structural_graph(n_channels, &mut rng::stream(seed, 0, 0, DrawKind::Structure))
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub n_channels: usize,
    pub n_time: usize,
    pub structural_graph: WeightedGraph<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub profile: SpectralProfile,
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_time < 2 {
            return Err(GspError::InvalidConfig(format!("n_time {} < 2", self.n_time)));
        }
        if self.n_channels < 2 {
            return Err(GspError::InvalidConfig(format!("n_channels {} < 2", self.n_channels)));
        }
        if self.structural_graph.n() != self.n_channels {
            return Err(GspError::DimensionMismatch { expected: self.n_channels, found: self.structural_graph.n() });
        }
        if !self.structural_graph.is_symmetric() {
            return Err(GspError::InvalidConfig("structural graph must be symmetric".into()));
        }
        if ![self.alpha, self.beta, self.gamma].iter().all(|v| v.is_finite()) {
            return Err(GspError::InvalidConfig("alpha, beta and gamma must be finite".into()));
        }
        Ok(())
    }

    /// Spectral radius of α·P·A_s·P with P the centring projector. The
    /// recursion only feeds centred signals through A_s, so this radius (not
    /// that of α·A_s) decides whether the signal stays bounded.
    pub fn effective_radius(&self) -> f64 {
        let n = self.n_channels;
        let p = DMatrix::<f64>::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
        let m = &p * self.structural_graph.weights() * &p * self.alpha;
        eigendecompose_symmetric(&m).map(|e| e.values.amax()).unwrap_or(f64::INFINITY)
    }

    /// Human-readable warnings; empty when the configuration looks sane.
    pub fn warnings(&self) -> Vec<String> {
        let r = self.effective_radius();
        if r >= 1.0 {
            vec![format!("effective spatial gain {r:.3} ≥ 1: simulated signals may diverge")]
        } else {
            Vec::new()
        }
    }

    pub fn with_profile(&self, profile: SpectralProfile) -> Self {
        Self { profile, ..self.clone() }
    }
}

/// Runs the recursion for one sample. Random draws come from streams keyed by
/// (seed, sample_id, channel), so the output does not depend on which other
/// samples were generated.
pub fn simulate_sample(config: &SimConfig, sample_id: u64) -> Result<MultivariateSignal<f64>> {
    config.validate()?;
    let noise = ColouredNoise::new(&config.profile, config.n_time)?;
    simulate_with(config, &noise, sample_id)
}

fn simulate_with(config: &SimConfig, noise: &ColouredNoise, sample_id: u64) -> Result<MultivariateSignal<f64>> {
    let (nc, nt) = (config.n_channels, config.n_time);
    let mut coloured = DMatrix::zeros(nc, nt);
    let mut innovation = DMatrix::zeros(nc, nt);
    for c in 0..nc {
        let ch = c as u32;
        let e_hat = noise.draw(&mut rng::stream(config.seed, sample_id, ch, DrawKind::Coloured));
        let e = rng::normals(&mut rng::stream(config.seed, sample_id, ch, DrawKind::Innovation), nt);
        coloured.row_mut(c).copy_from_slice(&e_hat);
        innovation.row_mut(c).copy_from_slice(&e);
    }
    let a = config.structural_graph.weights();
    let mut x = DMatrix::zeros(nc, nt);
    x.set_column(0, &(coloured.column(0) * config.beta));
    let mut hat = DVector::zeros(nc);
    for t in 1..nt {
        let prev = x.column(t - 1);
        let mean = prev.mean();
        for c in 0..nc {
            hat[c] = prev[c] - mean + config.gamma * innovation[(c, t)];
        }
        let next = a * &hat * config.alpha + coloured.column(t) * config.beta;
        x.set_column(t, &next);
    }
    MultivariateSignal::new(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledSample {
    pub signal: MultivariateSignal<f64>,
    /// 1 or 2.
    pub condition: u8,
    pub sample_id: u64,
}

/// `n_samples` samples with ids `first_id..first_id + n_samples`; the first
/// half uses h1 (condition 1), the second half h2 (condition 2).
pub fn generate_fold(
    config: &SimConfig,
    n_samples: usize,
    profiles: (&SpectralProfile, &SpectralProfile),
    first_id: u64,
) -> Result<Vec<LabelledSample>> {
    if n_samples % 2 != 0 {
        return Err(GspError::OddSampleCount(n_samples));
    }
    config.validate()?;
    let noises = [ColouredNoise::new(profiles.0, config.n_time)?, ColouredNoise::new(profiles.1, config.n_time)?];
    let half = n_samples / 2;
    (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let cond = if i < half { 1u8 } else { 2u8 };
            let sample_id = first_id + i as u64;
            let signal = simulate_with(config, &noises[usize::from(cond - 1)], sample_id)?;
            Ok(LabelledSample { signal, condition: cond, sample_id })
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
struct SampleRow {
    sample_id: u64,
    condition: u8,
    channel: usize,
    t: usize,
    value: f64,
}

/// Long-format CSV: `sample_id,condition,channel,t,value`.
pub fn write_samples_csv<W: Write>(samples: &[LabelledSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        let v = s.signal.values();
        for channel in 0..v.nrows() {
            for t in 0..v.ncols() {
                w.serialize(SampleRow { sample_id: s.sample_id, condition: s.condition, channel, t, value: v[(channel, t)] })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples_csv<R: Read>(input: R) -> Result<Vec<LabelledSample>> {
    let mut rows: Vec<SampleRow> = Vec::new();
    for r in csv::Reader::from_reader(input).deserialize() {
        rows.push(r?);
    }
    let mut ids: Vec<u64> = rows.iter().map(|r| r.sample_id).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut out = Vec::with_capacity(ids.len());
    for id in ids {
        let mine: Vec<&SampleRow> = rows.iter().filter(|r| r.sample_id == id).collect();
        let nc = mine.iter().map(|r| r.channel).max().unwrap_or(0) + 1;
        let nt = mine.iter().map(|r| r.t).max().unwrap_or(0) + 1;
        if mine.len() != nc * nt {
            return Err(GspError::Parse(format!("sample {id}: expected {} rows, found {}", nc * nt, mine.len())));
        }
        let condition = mine[0].condition;
        if !(condition == 1 || condition == 2) || mine.iter().any(|r| r.condition != condition) {
            return Err(GspError::Parse(format!("sample {id}: bad condition label")));
        }
        let mut m = DMatrix::zeros(nc, nt);
        for r in mine {
            m[(r.channel, r.t)] = r.value;
        }
        out.push(LabelledSample { signal: MultivariateSignal::new(m)?, condition, sample_id: id });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(alpha: f64, n_time: usize) -> SimConfig {
        SimConfig {
            n_channels: 4,
            n_time,
            structural_graph: structural_graph(4, 3).unwrap(),
            alpha,
            beta: 1.0,
            gamma: 1.0,
            profile: SpectralProfile::flat(256.0),
            seed: 3,
        }
    }

    #[test]
    fn profile_interpolation_and_mirror() {
        let p = SpectralProfile::new(256.0, vec![0.0, 64.0, 128.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.at(32.0), 0.5);
        assert_eq!(p.at(-32.0), 0.5);
        let r = p.render(8);
        assert_eq!(r, vec![0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 1.0, 0.5]);
        assert!(SpectralProfile::new(256.0, vec![0.0, 1.0], vec![1.0, -1.0]).is_err());
        assert!(SpectralProfile::new(256.0, vec![1.0, 2.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn coloured_noise_is_normalized() {
        let p = ProfileFamily::default().profile(10.0, 256.0).unwrap();
        let y = coloured_noise(&p, 1000, &mut rng::stream(1, 0, 0, DrawKind::Auxiliary)).unwrap();
        let mean = y.iter().sum::<f64>() / 1000.0;
        let sd = (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 1000.0).sqrt();
        assert!(mean.abs() < 1e-9 && (sd - 1.0).abs() < 1e-9);
    }

    #[test]
    fn structural_graph_ranges() {
        let g = structural_graph(23, 11).unwrap();
        let a = g.weights();
        for i in 0..23 {
            assert_eq!(a[(i, i)], 0.4);
            for j in 0..23 {
                assert_eq!(a[(i, j)], a[(j, i)]);
                if i != j {
                    assert!((-0.1..=0.4).contains(&a[(i, j)]));
                }
            }
        }
        assert_eq!(g, structural_graph(23, 11).unwrap());
        assert_ne!(g, structural_graph(23, 12).unwrap());
    }

    #[test]
    fn alpha_zero_gives_scaled_coloured_noise() {
        let mut c = config(0.0, 64);
        c.beta = 2.0;
        let x = simulate_sample(&c, 5).unwrap();
        let noise = ColouredNoise::new(&c.profile, 64).unwrap();
        let e0 = noise.draw(&mut rng::stream(3, 5, 0, DrawKind::Coloured));
        for t in 0..64 {
            assert!((x.values()[(0, t)] - 2.0 * e0[t]).abs() < 1e-12);
        }
    }

    #[test]
    fn simulation_is_deterministic_and_keyed() {
        let c = config(0.5, 128);
        assert_eq!(simulate_sample(&c, 1).unwrap(), simulate_sample(&c, 1).unwrap());
        assert_ne!(simulate_sample(&c, 1).unwrap(), simulate_sample(&c, 2).unwrap());
    }

    #[test]
    fn fold_labels_and_ids() {
        let c = config(0.5, 64);
        let (h1, h2) = condition_profiles(&ProfileFamily::default(), Difficulty::Easy, 256.0).unwrap();
        let f = generate_fold(&c, 10, (&h1, &h2), 40).unwrap();
        assert_eq!(f.iter().filter(|s| s.condition == 1).count(), 5);
        assert_eq!(f.iter().map(|s| s.sample_id).collect::<Vec<_>>(), (40..50).collect::<Vec<_>>());
        assert_eq!(f, generate_fold(&c, 10, (&h1, &h2), 40).unwrap());
        assert!(matches!(generate_fold(&c, 9, (&h1, &h2), 0), Err(GspError::OddSampleCount(9))));
        // Ids, not position in the fold, key the draws.
        let single = generate_fold(&c, 2, (&h1, &h2), 44).unwrap();
        assert_eq!(single[0].signal, f[4].signal);
    }

    #[test]
    fn profile_distance_orders_difficulties() {
        let fam = ProfileFamily::default();
        let d: Vec<f64> = Difficulty::ALL
            .iter()
            .map(|&k| {
                let (a, b) = condition_profiles(&fam, k, 256.0).unwrap();
                a.distance(&b)
            })
            .collect();
        assert!(d[0] > d[1] && d[1] > d[2] && d[2] > 0.0);
        let bad = ProfileFamily { shift_medium_hz: 2.0, ..fam };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn samples_csv_round_trip() {
        let c = config(0.5, 16);
        let (h1, h2) = condition_profiles(&ProfileFamily::default(), Difficulty::Medium, 256.0).unwrap();
        let f = generate_fold(&c, 4, (&h1, &h2), 0).unwrap();
        let mut buf = Vec::new();
        write_samples_csv(&f, &mut buf).unwrap();
        assert!(buf.starts_with(b"sample_id,condition,channel,t,value\n"));
        let back = read_samples_csv(buf.as_slice()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn default_parameters_are_effectively_stable() {
        let mut c = config(0.5, 16);
        c.n_channels = 23;
        c.structural_graph = structural_graph(23, 0).unwrap();
        assert!(c.effective_radius() < 1.0);
        assert!(c.warnings().is_empty());
    }
}
