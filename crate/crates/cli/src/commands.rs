//! Subcommand implementations.

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::verify;
use gsp_core::graph::read_graph_csv;
use gsp_core::pipeline::{training_graph, BaselineKind, ExperimentResult};
use gsp_core::simulator::{condition_profiles, generate_fold, read_samples_csv, write_samples_csv, Difficulty};
use gsp_core::spectral::{gft_basis, write_modes_csv, GftKind};
use gsp_core::Graph;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

fn create_file(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct SampleSidecar<'a> {
    n_samples: usize,
    difficulty: Difficulty,
    code_version: &'static str,
    config: &'a RunConfig,
}

/// Writes `samples.csv` and `samples.toml` into `out`.
pub fn cmd_simulate(cfg: &RunConfig, n: usize, difficulty: Difficulty, out: &Path, log: &mut dyn Write) -> Result<()> {
    let settings = cfg.settings()?;
    let (h1, h2) = condition_profiles(&settings.family, difficulty, cfg.sim.sample_rate)?;
    let sim = cfg.sim.to_config(h1.clone())?;
    for w in sim.warnings() {
        writeln!(log, "warning: {w}")?;
    }
    let samples = generate_fold(&sim, n, (&h1, &h2), 0)?;
    fs::create_dir_all(out)?;
    write_samples_csv(&samples, create_file(&out.join("samples.csv"))?)?;
    let sidecar = SampleSidecar { n_samples: n, difficulty, code_version: env!("CARGO_PKG_VERSION"), config: cfg };
    let text = toml::to_string(&sidecar).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(out.join("samples.toml"), text)?;
    writeln!(log, "wrote {n} samples to {}", out.join("samples.csv").display())?;
    Ok(())
}

#[derive(Serialize)]
struct RunManifest<'a> {
    code_version: &'static str,
    difficulties: &'a [Difficulty],
    n_records: usize,
    config: &'a RunConfig,
}

/// Runs the experiment, writes `results.csv` and `run_manifest.toml`, and
/// prints a per-model summary.
pub fn cmd_run(cfg: &RunConfig, difficulties: &[Difficulty], out: &Path, log: &mut dyn Write) -> Result<ExperimentResult> {
    let settings = cfg.settings()?;
    let probe = cfg.sim.to_config(gsp_core::simulator::SpectralProfile::flat(cfg.sim.sample_rate))?;
    for w in probe.warnings() {
        writeln!(log, "warning: {w}")?;
    }
    let mut all = ExperimentResult::default();
    for &d in difficulties {
        let started = std::time::Instant::now();
        let r = settings.run_difficulty(d)?;
        writeln!(log, "{d}: {} records in {:.1} s", r.records.len(), started.elapsed().as_secs_f64())?;
        all.extend(r);
    }
    fs::create_dir_all(out)?;
    all.write_csv(create_file(&out.join("results.csv"))?)?;
    let manifest =
        RunManifest { code_version: env!("CARGO_PKG_VERSION"), difficulties, n_records: all.records.len(), config: cfg };
    fs::write(out.join("run_manifest.toml"), toml::to_string(&manifest).map_err(|e| CliError::Config(e.to_string()))?)?;
    write_summary(&all, difficulties, cfg, log)?;
    Ok(all)
}

fn write_summary(res: &ExperimentResult, difficulties: &[Difficulty], cfg: &RunConfig, log: &mut dyn Write) -> Result<()> {
    writeln!(log, "{:<10} {:<15} {:<10} {:>6} {:>6} {:>6}", "difficulty", "model", "gft_kind", "mean", "min", "max")?;
    for &d in difficulties {
        for &m in &cfg.cv.models {
            for &k in &cfg.cv.gft_kinds {
                let a = res.accuracies(d, m, k);
                if a.is_empty() {
                    continue;
                }
                let mean = a.iter().sum::<f64>() / a.len() as f64;
                let min = a.iter().copied().fold(f64::INFINITY, f64::min);
                let max = a.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                writeln!(log, "{:<10} {:<15} {:<10} {mean:>6.3} {min:>6.3} {max:>6.3}", d.as_str(), m.as_str(), k.as_str())?;
            }
        }
    }
    Ok(())
}

pub enum GraphSource<'a> {
    GraphCsv(&'a Path),
    Fold(&'a Path),
    /// Simulate the initial training set from the configuration.
    Simulated(Difficulty),
}

/// Writes the graph Fourier modes of a graph as `mode_index,eigenvalue,node,weight`.
pub fn cmd_export_modes(cfg: &RunConfig, source: GraphSource<'_>, kind: GftKind, out: &Path) -> Result<Graph> {
    let graph = match source {
        GraphSource::GraphCsv(p) => {
            read_graph_csv(fs::File::open(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)?
        }
        GraphSource::Fold(p) => {
            let samples =
                read_samples_csv(fs::File::open(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?)?;
            training_graph(&samples)?
        }
        GraphSource::Simulated(d) => {
            let (h1, h2) = condition_profiles(&cfg.family(), d, cfg.sim.sample_rate)?;
            let sim = cfg.sim.to_config(h1.clone())?;
            training_graph(&generate_fold(&sim, cfg.cv.initial_samples, (&h1, &h2), 0)?)?
        }
    };
    let basis = gft_basis(&graph, kind, kind.default_source())?;
    write_modes_csv(&basis, create_file(out)?)?;
    Ok(graph)
}

/// Prints one line per identity check; fails when any check fails.
pub fn cmd_verify(log: &mut dyn Write) -> Result<()> {
    let results = verify::run_checks();
    let failed = results.iter().filter(|r| !r.passed).count();
    for r in &results {
        writeln!(log, "{} {:<45} {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail)?;
    }
    writeln!(log, "{} checks, {failed} failed", results.len())?;
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed, total: results.len() });
    }
    Ok(())
}

/// Parses `easy,medium` style lists.
pub fn parse_difficulties(s: &str) -> Result<Vec<Difficulty>> {
    s.split(',').map(|p| p.parse::<Difficulty>().map_err(|e| CliError::Config(e.to_string()))).collect()
}

pub fn parse_models(s: &str) -> Result<Vec<BaselineKind>> {
    s.split(',').map(|p| p.parse::<BaselineKind>().map_err(|e| CliError::Config(e.to_string()))).collect()
}
