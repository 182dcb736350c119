//! Accuracy records and their CSV form.

use super::BaselineKind;
use crate::error::{GspError, Result};
use crate::simulator::Difficulty;
use crate::spectral::GftKind;
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRecord {
    pub difficulty: Difficulty,
    pub model: BaselineKind,
    pub gft_kind: GftKind,
    pub graph_frequency_index: usize,
    /// Mean basis eigenvalue at this index over the iterations; `None` for the
    /// single-channel model, whose channels carry no frequency.
    pub eigenvalue: Option<f64>,
    pub correct: usize,
    pub n_test: usize,
}

impl AccuracyRecord {
    pub fn accuracy(&self) -> f64 {
        if self.n_test == 0 {
            0.0
        } else {
            self.correct as f64 / self.n_test as f64
        }
    }
}

pub const RESULTS_HEADER: [&str; 7] =
    ["difficulty", "model", "gft_kind", "graph_frequency_index", "eigenvalue", "accuracy", "n_test"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<AccuracyRecord>,
}

impl ExperimentResult {
    pub fn extend(&mut self, other: ExperimentResult) {
        self.records.extend(other.records);
    }

    /// Records of one curve, ordered by frequency index.
    pub fn curve(&self, difficulty: Difficulty, model: BaselineKind, gft_kind: GftKind) -> Vec<&AccuracyRecord> {
        let mut v: Vec<&AccuracyRecord> = self
            .records
            .iter()
            .filter(|r| r.difficulty == difficulty && r.model == model && r.gft_kind == gft_kind)
            .collect();
        v.sort_by_key(|r| r.graph_frequency_index);
        v
    }

    pub fn accuracies(&self, difficulty: Difficulty, model: BaselineKind, gft_kind: GftKind) -> Vec<f64> {
        self.curve(difficulty, model, gft_kind).iter().map(|r| r.accuracy()).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(RESULTS_HEADER)?;
        for r in &self.records {
            w.write_record([
                r.difficulty.as_str().to_string(),
                r.model.as_str().to_string(),
                r.gft_kind.as_str().to_string(),
                r.graph_frequency_index.to_string(),
                r.eigenvalue.map(|v| v.to_string()).unwrap_or_default(),
                r.accuracy().to_string(),
                r.n_test.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(input);
        if rd.headers()?.iter().ne(RESULTS_HEADER) {
            return Err(GspError::Parse("unexpected results header".into()));
        }
        let mut records = Vec::new();
        for row in rd.records() {
            let row = row?;
            let num = |i: usize| -> Result<f64> {
                row[i].parse::<f64>().map_err(|e| GspError::Parse(format!("column {}: {e}", RESULTS_HEADER[i])))
            };
            let n_test = num(6)? as usize;
            let accuracy = num(5)?;
            records.push(AccuracyRecord {
                difficulty: row[0].parse()?,
                model: row[1].parse()?,
                gft_kind: row[2].parse()?,
                graph_frequency_index: num(3)? as usize,
                eigenvalue: if row[4].is_empty() { None } else { Some(num(4)?) },
                correct: (accuracy * n_test as f64).round() as usize,
                n_test,
            });
        }
        Ok(Self { records })
    }
}
