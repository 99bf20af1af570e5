//! Empirical check of the concentration guarantees: matching-size deviations
//! beyond 2 sqrt(scale) ln(scale) should occur with probability at most
//! 2/scale, so a run whose exceedance frequency clears that rate plus
//! binomial sampling slack is flagged. A violation detector, not a tightness
//! test: the radius is loose by design.

use serde::{Deserialize, Serialize};

use crate::analysis::numeric::kahan_sum;
use crate::analysis::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub mean: f64,
    /// 2 sqrt(scale) ln(scale)
    pub radius: f64,
    pub max_abs_deviation: f64,
    /// Results with |x - mean| >= radius.
    pub exceed_count: usize,
    pub exceed_frequency: f64,
    /// 2/scale plus three binomial standard errors at the sample size.
    pub threshold: f64,
    pub flagged: bool,
}

/// Compares the empirical deviation-exceedance frequency of `results`
/// against the theoretical 2/scale rate. `scale` is the relevant graph
/// dimension (m for matching sizes, n for the Hall statistic). Requires at
/// least 30 results.
pub fn concentration_check(
    results: &[f64],
    scale: usize,
) -> Result<ConcentrationReport, AnalysisError> {
    if results.len() < 30 {
        return Err(AnalysisError::TooFewResults(results.len()));
    }
    let t = results.len() as f64;
    let mean = kahan_sum(results.iter().copied()) / t;
    let s = scale as f64;
    let radius = if scale <= 1 { 0.0 } else { 2.0 * s.sqrt() * s.ln() };
    let mut max_abs_deviation = 0.0f64;
    let mut exceed_count = 0usize;
    for &x in results {
        let dev = (x - mean).abs();
        max_abs_deviation = max_abs_deviation.max(dev);
        if dev >= radius {
            exceed_count += 1;
        }
    }
    let exceed_frequency = exceed_count as f64 / t;
    let p = (2.0 / s).min(1.0);
    let threshold = p + 3.0 * (p * (1.0 - p) / t).sqrt();
    Ok(ConcentrationReport {
        mean,
        radius,
        max_abs_deviation,
        exceed_count,
        exceed_frequency,
        threshold,
        flagged: exceed_frequency > threshold,
    })
}
