//! Welch power spectra and the 20-value band features.

use crate::error::{GspError, Result};
use crate::signal::MultivariateSignal;
use crate::spectral::GraphFourierBasis;
use nalgebra::DMatrix;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub const PSD_BINS: usize = 128;
pub const KEPT_BINS: usize = 100;
pub const BLOCK: usize = 5;
pub const N_FEATURES: usize = KEPT_BINS / BLOCK;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WelchConfig {
    pub sample_rate: f64,
    pub segment_len: usize,
    /// Fraction of a segment shared with the next one, in [0, 1).
    pub overlap_fraction: f64,
}

impl Default for WelchConfig {
    fn default() -> Self {
        Self { sample_rate: 256.0, segment_len: 254, overlap_fraction: 0.5 }
    }
}

impl WelchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_len < 2 {
            return Err(GspError::InvalidConfig(format!("segment_len {} < 2", self.segment_len)));
        }
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(GspError::InvalidConfig(format!("overlap_fraction {} outside [0, 1)", self.overlap_fraction)));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate.is_finite()) {
            return Err(GspError::InvalidConfig(format!("sample_rate {}", self.sample_rate)));
        }
        Ok(())
    }

    pub fn overlap(&self) -> usize {
        (self.segment_len as f64 * self.overlap_fraction).floor() as usize
    }

    pub fn step(&self) -> usize {
        self.segment_len - self.overlap()
    }

    pub fn n_bins(&self) -> usize {
        self.segment_len / 2 + 1
    }

    pub fn n_segments(&self, len: usize) -> usize {
        if len < self.segment_len {
            0
        } else {
            (len - self.segment_len) / self.step() + 1
        }
    }

    pub fn bin_frequency(&self, k: usize) -> f64 {
        k as f64 * self.sample_rate / self.segment_len as f64
    }
}

/// Reusable Welch estimator: Hann window, constant detrend per segment,
/// one-sided density scaling.
#[derive(Clone)]
pub struct Welch {
    config: WelchConfig,
    window: Vec<f64>,
    /// 1 / (fs · Σw²).
    scale: f64,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Welch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Welch").field("config", &self.config).finish()
    }
}

impl Welch {
    pub fn new(config: WelchConfig) -> Result<Self> {
        config.validate()?;
        let m = config.segment_len;
        // Periodic Hann.
        let window: Vec<f64> = (0..m).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / m as f64).cos()).collect();
        let scale = 1.0 / (config.sample_rate * window.iter().map(|w| w * w).sum::<f64>());
        let fft = FftPlanner::new().plan_fft_forward(m);
        Ok(Self { config, window, scale, fft })
    }

    pub fn config(&self) -> &WelchConfig {
        &self.config
    }

    /// Factor that turns |X_k|² into one-sided density at bin k.
    fn bin_scale(&self, k: usize) -> f64 {
        let m = self.config.segment_len;
        let edge = k == 0 || (m % 2 == 0 && k == m / 2);
        if edge {
            self.scale
        } else {
            2.0 * self.scale
        }
    }

    /// Windowed, detrended FFT of every segment, truncated to `n_bins` bins.
    fn segment_spectra(&self, x: &[f64], n_bins: usize) -> Result<Vec<Vec<Complex<f64>>>> {
        let m = self.config.segment_len;
        if x.len() < m {
            return Err(GspError::SignalTooShort { len: x.len(), segment: m });
        }
        let step = self.config.step();
        let mut out = Vec::with_capacity(self.config.n_segments(x.len()));
        let mut buf = vec![Complex::new(0.0, 0.0); m];
        let mut scratch = vec![Complex::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        for s in 0..self.config.n_segments(x.len()) {
            let seg = &x[s * step..s * step + m];
            let mean = seg.iter().sum::<f64>() / m as f64;
            for ((b, v), w) in buf.iter_mut().zip(seg).zip(&self.window) {
                *b = Complex::new((v - mean) * w, 0.0);
            }
            self.fft.process_with_scratch(&mut buf, &mut scratch);
            out.push(buf[..n_bins].to_vec());
        }
        Ok(out)
    }

    pub fn psd(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n_bins = self.config.n_bins();
        let spectra = self.segment_spectra(x, n_bins)?;
        let n_seg = spectra.len() as f64;
        Ok((0..n_bins)
            .map(|k| spectra.iter().map(|s| s[k].norm_sqr()).sum::<f64>() * self.bin_scale(k) / n_seg)
            .collect())
    }

    /// Real part of the Welch cross-spectral matrix of all channels, averaged
    /// over each block of `BLOCK` bins in `0..KEPT_BINS`.
    ///
    /// For any real vector q, qᵀ S_b q equals feature b of the Welch PSD of
    /// the projected signal qᵀX, so one pass per sample serves every basis.
    pub fn band_cross_spectra(&self, x: &MultivariateSignal<f64>) -> Result<Vec<DMatrix<f64>>> {
        if self.config.n_bins() != PSD_BINS {
            return Err(GspError::WrongLength { expected: PSD_BINS, found: self.config.n_bins() });
        }
        let nc = x.n_channels();
        let per_channel: Vec<Vec<Vec<Complex<f64>>>> =
            (0..nc).map(|c| self.segment_spectra(&x.channel(c), KEPT_BINS)).collect::<Result<_>>()?;
        let n_seg = per_channel[0].len();
        let mut bands = vec![DMatrix::zeros(nc, nc); N_FEATURES];
        // Rows: channels; columns: (segment, bin) pairs of one band.
        let mut y_re = DMatrix::zeros(nc, n_seg * BLOCK);
        let mut y_im = DMatrix::zeros(nc, n_seg * BLOCK);
        for (b, band) in bands.iter_mut().enumerate() {
            for c in 0..nc {
                for s in 0..n_seg {
                    for j in 0..BLOCK {
                        let k = b * BLOCK + j;
                        let w = (self.bin_scale(k) / (n_seg * BLOCK) as f64).sqrt();
                        let z = per_channel[c][s][k] * w;
                        y_re[(c, s * BLOCK + j)] = z.re;
                        y_im[(c, s * BLOCK + j)] = z.im;
                    }
                }
            }
            *band = &y_re * y_re.transpose() + &y_im * y_im.transpose();
        }
        Ok(bands)
    }
}

/// One-shot Welch PSD.
pub fn welch_psd(signal: &[f64], config: &WelchConfig) -> Result<Vec<f64>> {
    Welch::new(*config)?.psd(signal)
}

/// Drops bins 100..128 and averages blocks of 5.
pub fn psd_features(psd: &[f64]) -> Result<Vec<f64>> {
    if psd.len() != PSD_BINS {
        return Err(GspError::WrongLength { expected: PSD_BINS, found: psd.len() });
    }
    Ok(psd[..KEPT_BINS].chunks(BLOCK).map(|c| c.iter().sum::<f64>() / BLOCK as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub graph_frequency_index: usize,
    pub sample_id: u64,
    pub condition: u8,
}

/// Features of every mode of `basis` from cached band cross-spectra:
/// result[k][b] = q_kᵀ S_b q_k.
pub fn basis_features(basis: &GraphFourierBasis<f64>, bands: &[DMatrix<f64>]) -> Vec<Vec<f64>> {
    let q = basis.modes();
    let n = q.ncols();
    let mut out = vec![vec![0.0; bands.len()]; n];
    for (b, s) in bands.iter().enumerate() {
        let sq = s * q;
        for k in 0..n {
            out[k][b] = q.column(k).dot(&sq.column(k));
        }
    }
    out
}

/// Features straight from the signal: GFT, then Welch per mode.
pub fn direct_features(
    basis: &GraphFourierBasis<f64>,
    x: &MultivariateSignal<f64>,
    welch: &Welch,
) -> Result<Vec<Vec<f64>>> {
    let xt = crate::spectral::gft(basis, x)?;
    (0..xt.n_channels()).map(|k| psd_features(&welch.psd(&xt.channel(k))?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{self, DrawKind};
    use crate::spectral::GftKind;

    #[test]
    fn feature_reduction_examples() {
        assert_eq!(psd_features(&[1.0; 128]).unwrap(), vec![1.0; 20]);
        let idx: Vec<f64> = (0..128).map(|i| i as f64).collect();
        let f = psd_features(&idx).unwrap();
        assert_eq!(f, (0..20).map(|b| (5 * b + 2) as f64).collect::<Vec<_>>());
        let mut imp = vec![0.0; 128];
        imp[110] = 1.0;
        assert_eq!(psd_features(&imp).unwrap(), vec![0.0; 20]);
        assert!(matches!(psd_features(&[0.0; 127]), Err(GspError::WrongLength { .. })));
    }

    #[test]
    fn default_welch_has_128_bins() {
        let c = WelchConfig::default();
        assert_eq!(c.n_bins(), 128);
        assert_eq!(c.step(), 127);
        assert_eq!(c.n_segments(2048), 15);
        assert!(matches!(welch_psd(&[0.0; 100], &c), Err(GspError::SignalTooShort { .. })));
    }

    #[test]
    fn sinusoid_peak() {
        let c = WelchConfig::default();
        let x: Vec<f64> = (0..2048).map(|t| (2.0 * PI * 10.0 * t as f64 / 256.0).sin()).collect();
        let p = welch_psd(&x, &c).unwrap();
        let arg = (0..p.len()).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        let nearest = (10.0 / c.bin_frequency(1)).round() as usize;
        assert_eq!(arg, nearest);
    }

    #[test]
    fn white_noise_parseval() {
        let c = WelchConfig::default();
        let x = rng::normals(&mut rng::stream(2, 0, 0, DrawKind::Auxiliary), 2048);
        let p = welch_psd(&x, &c).unwrap();
        let df = c.bin_frequency(1);
        let power: f64 = p.iter().sum::<f64>() * df;
        let var = x.iter().map(|v| v * v).sum::<f64>() / 2048.0;
        assert!((power / var - 1.0).abs() < 0.1, "{power} vs {var}");
    }

    #[test]
    fn cross_spectral_route_matches_direct() {
        let welch = Welch::new(WelchConfig::default()).unwrap();
        let rows: Vec<Vec<f64>> = (0..5).map(|c| rng::normals(&mut rng::stream(4, 0, c, DrawKind::Auxiliary), 600)).collect();
        let x = MultivariateSignal::from_rows(&rows).unwrap();
        let g = crate::variation::pearson_graph(&x).unwrap();
        let basis = crate::spectral::gft_basis(&g, GftKind::LaplacianBased, crate::GraphMatrixKind::Laplacian).unwrap();
        let fast = basis_features(&basis, &welch.band_cross_spectra(&x).unwrap());
        let slow = direct_features(&basis, &x, &welch).unwrap();
        for (a, b) in fast.iter().flatten().zip(slow.iter().flatten()) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "{a} vs {b}");
        }
    }
}
