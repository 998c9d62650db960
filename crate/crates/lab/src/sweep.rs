//! The `sweep` command: communication growth over random graphs of fixed
//! average degree.

use edcs_core::instances::gen_random;
use edcs_core::protocol::ProtocolRunner;
use edcs_core::rng::derive_seed;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::error::LabError;
use crate::report::{sweep_point, sweep_summary, Check, SummaryReport};
use crate::run::{map_trials, trial_record};

pub fn sweep_experiment(cfg: &ExperimentConfig) -> Result<SummaryReport, LabError> {
    cfg.validate()?;
    let settings = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| LabError::usage("sweep needs a list of n"))?;
    if settings.ns.iter().any(|&n| n < 2) {
        return Err(LabError::usage("sweep sizes must be at least 2"));
    }
    let mut points = Vec::with_capacity(settings.ns.len());
    for &n in &settings.ns {
        let density = (settings.avg_degree / (n - 1) as f64).min(1.0);
        let g = gen_random(settings.family, n, density, derive_seed(cfg.master_seed, n as u64))
            .map_err(|e| LabError::usage(e.to_string()))?;
        let runner = ProtocolRunner::new(&g);
        let point_cfg = ExperimentConfig {
            master_seed: derive_seed(cfg.master_seed ^ 0x5357_4545_5000_0000, n as u64),
            ..cfg.clone()
        };
        let trials = map_trials(&point_cfg, &runner, None, |i, t| trial_record(i, &t))?;
        points.push(sweep_point(n, g.num_edges(), trials));
    }
    let summary = sweep_summary(points);
    let (n_max, m_max) = summary.points.last().map_or((0, 0), |p| (p.n, p.edges));
    let mut report = SummaryReport::new("sweep", cfg.clone(), n_max, m_max, Vec::new());
    if let Some((lo, hi)) = cfg.assertions.exponent_range {
        report.checks.push(Check {
            name: "exponent-range".into(),
            passed: summary.exponent >= lo && summary.exponent <= hi,
            detail: json!({
                "exponent": summary.exponent,
                "exponent_log_corrected": summary.exponent_log_corrected,
                "range": [lo, hi],
                "constant": summary.constant,
            }),
        });
    }
    report.sweep = Some(summary);
    Ok(report)
}
