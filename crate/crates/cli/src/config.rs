//! Run configuration: a TOML document with `[sim]`, `[profiles]`, `[cv]` and
//! `[output]` sections, plus `section.key=value` overrides.

use crate::error::{CliError, Result};
use gsp_core::pipeline::{BaselineKind, CvConfig, ExperimentSettings, ModelIterations, SimParams, SvmParams, WelchConfig};
use gsp_core::simulator::{Difficulty, ProfileFamily};
use gsp_core::spectral::GftKind;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub sim: SimParams,
    pub profiles: ProfilesSection,
    pub cv: CvSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfilesSection {
    pub peak_hz: f64,
    pub width_hz: f64,
    pub amplitude: f64,
    pub floor: f64,
    pub rolloff_hz: f64,
    pub shift_easy_hz: f64,
    pub shift_medium_hz: f64,
    pub shift_difficult_hz: f64,
    pub difficulties: Vec<Difficulty>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CvSection {
    pub k: usize,
    pub initial_samples: usize,
    pub models: Vec<BaselineKind>,
    pub gft_kinds: Vec<GftKind>,
    pub freeze_baseline: bool,
    pub segment_len: usize,
    pub overlap_fraction: f64,
    pub svm_lambda: f64,
    pub svm_epochs: usize,
    pub iterations: ModelIterations,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub directory: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let fam = ProfileFamily::default();
        let cv = CvConfig::default();
        Self {
            sim: SimParams::default(),
            profiles: ProfilesSection {
                peak_hz: fam.peak_hz,
                width_hz: fam.width_hz,
                amplitude: fam.amplitude,
                floor: fam.floor,
                rolloff_hz: fam.rolloff_hz,
                shift_easy_hz: fam.shift_easy_hz,
                shift_medium_hz: fam.shift_medium_hz,
                shift_difficult_hz: fam.shift_difficult_hz,
                difficulties: Difficulty::ALL.to_vec(),
            },
            cv: CvSection {
                k: cv.k,
                initial_samples: cv.initial_samples,
                models: cv.models,
                gft_kinds: cv.gft_kinds,
                freeze_baseline: cv.freeze_baseline,
                segment_len: cv.welch.segment_len,
                overlap_fraction: cv.welch.overlap_fraction,
                svm_lambda: cv.svm.lambda,
                svm_epochs: cv.svm.epochs,
                iterations: cv.iterations,
            },
            output: OutputSection { directory: PathBuf::from("out") },
        }
    }
}

impl RunConfig {
    /// Reads `path` (or the built-in defaults when `None`), applies the
    /// overrides and validates the result.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                text.parse::<toml::Table>().map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::try_from(RunConfig::default()).map_err(|e| CliError::Config(e.to_string()))?,
        };
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        let cfg: RunConfig = toml::Value::Table(doc).try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        cfg.settings()?.validate()?;
        if cfg.profiles.difficulties.is_empty() {
            return Err(CliError::Config("profiles.difficulties is empty".into()));
        }
        Ok(cfg)
    }

    pub fn family(&self) -> ProfileFamily {
        let p = &self.profiles;
        ProfileFamily {
            peak_hz: p.peak_hz,
            width_hz: p.width_hz,
            amplitude: p.amplitude,
            floor: p.floor,
            rolloff_hz: p.rolloff_hz,
            shift_easy_hz: p.shift_easy_hz,
            shift_medium_hz: p.shift_medium_hz,
            shift_difficult_hz: p.shift_difficult_hz,
        }
    }

    pub fn settings(&self) -> Result<ExperimentSettings> {
        let c = &self.cv;
        Ok(ExperimentSettings {
            sim: self.sim,
            family: self.family(),
            cv: CvConfig {
                k: c.k,
                initial_samples: c.initial_samples,
                iterations: c.iterations,
                models: c.models.clone(),
                gft_kinds: c.gft_kinds.clone(),
                freeze_baseline: c.freeze_baseline,
                svm: SvmParams { lambda: c.svm_lambda, epochs: c.svm_epochs },
                welch: WelchConfig {
                    sample_rate: self.sim.sample_rate,
                    segment_len: c.segment_len,
                    overlap_fraction: c.overlap_fraction,
                },
            },
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// `section.key=value`; the value is read as a TOML value, falling back to a
/// bare string.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override '{assignment}' is not key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.len() < 2 || keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("override key '{path}' must look like section.key")));
    }
    let value = parse_value(raw.trim());
    let mut table = doc;
    for k in &keys[..keys.len() - 1] {
        table = table
            .entry(k.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("'{k}' in '{path}' is not a section")))?;
    }
    table.insert(keys[keys.len() - 1].to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}
