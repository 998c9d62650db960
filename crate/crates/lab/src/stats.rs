use serde::{Deserialize, Serialize};

/// Two-sided 99% normal quantile.
pub const Z99: f64 = 2.575_829_303_548_901;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for one sample.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
    /// Normal-approximation 99% interval for the mean.
    pub ci99: (f64, f64),
    pub ci99_half_width: f64,
}

impl SampleSummary {
    /// Sequential fold in slice order, so the result depends only on the
    /// values and their order.
    pub fn of(values: &[f64]) -> Self {
        let count = values.len();
        if count == 0 {
            return Self {
                count,
                mean: 0.0,
                sd: 0.0,
                min: 0.0,
                max: 0.0,
                ci99: (0.0, 0.0),
                ci99_half_width: 0.0,
            };
        }
        let n = count as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if count > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        let half = Z99 * sd / n.sqrt();
        Self {
            count,
            mean,
            sd,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            ci99: (mean - half, mean + half),
            ci99_half_width: half,
        }
    }
}

/// Least-squares slope and intercept of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need two points to fit a line");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
