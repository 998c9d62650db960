//! Self-contained JSON reports. Every summary field is a pure function of
//! the per-trial records in the same report; [`SummaryReport::recompute`]
//! rebuilds them, and a well-formed report equals its recomputation.

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::stats::{linear_fit, SampleSummary};

pub const REPORT_SCHEMA: &str = "edcs-lab/report/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    pub output_size: usize,
    pub mu: usize,
    pub ratio: f64,
    pub max_words: u64,
    pub max_bytes: u64,
    pub h_size: usize,
    pub underfull: usize,
    pub fallback_used: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommunicationSummary {
    pub words: SampleSummary,
    /// Largest message over all trials, in words.
    pub max_words: u64,
    /// `max_words / (n·log₂ n)`.
    pub max_words_per_n_log_n: f64,
}

/// One verifier or assertion outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub n: usize,
    pub edges: usize,
    pub trials: Vec<TrialRecord>,
    pub mean_words: f64,
    pub words_per_n_log_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub points: Vec<SweepPoint>,
    /// Slope of `ln(mean_words)` against `ln n`: the exponent of `n` with
    /// no log factor in the model.
    pub exponent: f64,
    pub intercept: f64,
    /// Slope of `ln(mean_words / log₂ n)` against `ln n`.
    pub exponent_log_corrected: f64,
    /// Largest `mean_words / (n·log₂ n)` over the sweep.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub schema: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub num_vertices: usize,
    pub num_edges: usize,
    pub trials: Vec<TrialRecord>,
    pub ratio: SampleSummary,
    pub communication: CommunicationSummary,
    pub checks: Vec<Check>,
    pub sweep: Option<SweepSummary>,
}

fn n_log_n(n: usize) -> f64 {
    let n = n as f64;
    if n > 1.0 {
        n * n.log2()
    } else {
        1.0
    }
}

pub fn communication_of(trials: &[TrialRecord], n: usize) -> CommunicationSummary {
    let words: Vec<f64> = trials.iter().map(|t| t.max_words as f64).collect();
    let max_words = trials.iter().map(|t| t.max_words).max().unwrap_or(0);
    CommunicationSummary {
        words: SampleSummary::of(&words),
        max_words,
        max_words_per_n_log_n: max_words as f64 / n_log_n(n),
    }
}

pub fn sweep_point(n: usize, edges: usize, trials: Vec<TrialRecord>) -> SweepPoint {
    let mean_words = trials.iter().map(|t| t.max_words as f64).sum::<f64>() / trials.len().max(1) as f64;
    SweepPoint {
        n,
        edges,
        words_per_n_log_n: mean_words / n_log_n(n),
        trials,
        mean_words,
    }
}

/// Fits the sweep; needs at least two distinct `n`.
pub fn sweep_summary(points: Vec<SweepPoint>) -> SweepSummary {
    let points: Vec<SweepPoint> = points.into_iter().map(|p| sweep_point(p.n, p.edges, p.trials)).collect();
    let x: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let fit = |y: Vec<f64>| if points.len() >= 2 { linear_fit(&x, &y) } else { (f64::NAN, f64::NAN) };
    let (exponent, intercept) = fit(points.iter().map(|p| p.mean_words.max(1.0).ln()).collect());
    let (exponent_log_corrected, _) = fit(
        points
            .iter()
            .map(|p| (p.mean_words.max(1.0) / (p.n as f64).log2()).ln())
            .collect(),
    );
    let constant = points.iter().map(|p| p.words_per_n_log_n).fold(0.0, f64::max);
    SweepSummary {
        points,
        exponent,
        intercept,
        exponent_log_corrected,
        constant,
    }
}

impl SummaryReport {
    pub fn new(
        command: &str,
        config: ExperimentConfig,
        num_vertices: usize,
        num_edges: usize,
        trials: Vec<TrialRecord>,
    ) -> Self {
        let ratios: Vec<f64> = trials.iter().map(|t| t.ratio).collect();
        Self {
            schema: REPORT_SCHEMA.to_string(),
            command: command.to_string(),
            ratio: SampleSummary::of(&ratios),
            communication: communication_of(&trials, num_vertices),
            config,
            num_vertices,
            num_edges,
            trials,
            checks: Vec::new(),
            sweep: None,
        }
    }

    /// The report with every summary rebuilt from its per-trial records.
    pub fn recompute(&self) -> Self {
        let mut r = Self::new(
            &self.command,
            self.config.clone(),
            self.num_vertices,
            self.num_edges,
            self.trials.clone(),
        );
        r.checks = self.checks.clone();
        r.sweep = self.sweep.clone().map(|s| sweep_summary(s.points));
        r
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
