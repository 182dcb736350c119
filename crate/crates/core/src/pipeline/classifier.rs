//! Linear max-margin classifier trained by full-batch Pegasos.

use crate::error::{GspError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SvmParams {
    /// L2 penalty λ.
    pub lambda: f64,
    pub epochs: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self { lambda: 1e-3, epochs: 200 }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) || self.epochs == 0 {
            return Err(GspError::InvalidConfig("svm needs lambda > 0 and epochs ≥ 1".into()));
        }
        Ok(())
    }
}

/// sign(w·z + b) on z-scored input; positive means condition 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRule {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl LinearRule {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(x)
            .zip(self.mean.iter().zip(&self.scale))
            .map(|((w, v), (m, s))| w * (v - m) / s)
            .sum::<f64>()
            + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> u8 {
        if self.decision(x) >= 0.0 {
            1
        } else {
            2
        }
    }
}

fn label_sign(condition: u8) -> Result<f64> {
    match condition {
        1 => Ok(1.0),
        2 => Ok(-1.0),
        c => Err(GspError::InvalidParameter(format!("condition label {c}"))),
    }
}

/// Hinge loss + λ/2‖(w, b)‖² minimised with the 1/(λt) step on the full
/// training set. Standardisation statistics come from `features` only.
pub fn train_classifier(features: &[Vec<f64>], labels: &[u8], params: &SvmParams) -> Result<LinearRule> {
    params.validate()?;
    if features.is_empty() {
        return Err(GspError::EmptyTrainingSet);
    }
    if features.len() != labels.len() {
        return Err(GspError::LengthMismatch { left: features.len(), right: labels.len() });
    }
    let y: Vec<f64> = labels.iter().map(|&c| label_sign(c)).collect::<Result<_>>()?;
    if y.iter().all(|&v| v == y[0]) {
        return Err(GspError::SingleClassTrainingSet);
    }
    let d = features[0].len();
    if let Some(bad) = features.iter().find(|f| f.len() != d) {
        return Err(GspError::DimensionMismatch { expected: d, found: bad.len() });
    }
    let n = features.len() as f64;
    let mean: Vec<f64> = (0..d).map(|j| features.iter().map(|f| f[j]).sum::<f64>() / n).collect();
    let scale: Vec<f64> = (0..d)
        .map(|j| {
            let sd = (features.iter().map(|f| (f[j] - mean[j]).powi(2)).sum::<f64>() / n).sqrt();
            if sd > 0.0 && sd.is_finite() {
                sd
            } else {
                1.0
            }
        })
        .collect();
    // Augmented rows [z, 1] so the bias shares the penalty.
    let z: Vec<Vec<f64>> = features
        .iter()
        .map(|f| {
            let mut r: Vec<f64> = (0..d).map(|j| (f[j] - mean[j]) / scale[j]).collect();
            r.push(1.0);
            r
        })
        .collect();

    let lambda = params.lambda;
    let radius = 1.0 / lambda.sqrt();
    let mut w = vec![0.0; d + 1];
    let mut grad = vec![0.0; d + 1];
    for t in 1..=params.epochs {
        grad.iter_mut().for_each(|g| *g = 0.0);
        for (row, &yi) in z.iter().zip(&y) {
            let margin = yi * row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
            if margin < 1.0 {
                for (g, a) in grad.iter_mut().zip(row) {
                    *g += yi * a;
                }
            }
        }
        let eta = 1.0 / (lambda * t as f64);
        for (wj, gj) in w.iter_mut().zip(&grad) {
            *wj = (1.0 - eta * lambda) * *wj + eta * gj / n;
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > radius {
            w.iter_mut().for_each(|v| *v *= radius / norm);
        }
    }
    let bias = w.pop().unwrap_or(0.0);
    Ok(LinearRule { weights: w, bias, mean, scale })
}

/// Fraction of `features` whose predicted label matches.
pub fn accuracy(rule: &LinearRule, features: &[Vec<f64>], labels: &[u8]) -> f64 {
    correct_count(rule, features, labels) as f64 / features.len() as f64
}

pub fn correct_count(rule: &LinearRule, features: &[Vec<f64>], labels: &[u8]) -> usize {
    features.iter().zip(labels).filter(|(f, &l)| rule.predict(f) == l).count()
}
