//! One-step transition expectations of the unmatched-count Markov chain, a
//! reference primitive for testing the differential-equation model.
//!
//! State: Y_d unmatched offline nodes in each degree class d, degrees
//! strictly ascending. An arrival connects to each offline node of class d
//! independently with probability d/m and MinPredictedDegree consumes the
//! smallest hit class, so
//!
//!   E[Y_d' - Y_d] = -(1 - (1-d/m)^{Y_d}) * prod_{d' < d} (1-d'/m)^{Y_{d'}}.

use crate::analysis::AnalysisError;

/// Unmatched-count state of the chain. Counts may be fractional so that
/// expected trajectories are representable.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovState {
    pub degrees: Vec<f64>,
    pub counts: Vec<f64>,
}

impl MarkovState {
    /// Validates degrees strictly ascending and nonnegative, counts
    /// nonnegative, equal lengths.
    pub fn new(degrees: Vec<f64>, counts: Vec<f64>) -> Result<Self, AnalysisError> {
        if degrees.len() != counts.len() {
            return Err(AnalysisError::InvalidMarkovState(format!(
                "{} degrees vs {} counts",
                degrees.len(),
                counts.len()
            )));
        }
        let mut prev = f64::NEG_INFINITY;
        for &d in &degrees {
            if !(d.is_finite() && d >= 0.0 && d > prev) {
                return Err(AnalysisError::InvalidMarkovState(format!(
                    "degrees must be finite, nonnegative, strictly ascending; got {d}"
                )));
            }
            prev = d;
        }
        for &y in &counts {
            if !(y.is_finite() && y >= 0.0) {
                return Err(AnalysisError::InvalidMarkovState(format!(
                    "counts must be finite and nonnegative; got {y}"
                )));
            }
        }
        Ok(MarkovState { degrees, counts })
    }

    /// The scaled coordinates z_d = -k_d Y_d with k_d = -ln(1 - d/m), the
    /// change of variables under which the chain's fluid limit is the z
    /// differential-equation system.
    pub fn z(&self, m: usize) -> Vec<f64> {
        self.degrees
            .iter()
            .zip(&self.counts)
            .map(|(&d, &y)| {
                if y == 0.0 {
                    0.0
                } else {
                    y * (-(d / m as f64).min(1.0)).ln_1p()
                }
            })
            .collect()
    }
}

/// Per-class expected one-arrival change E[Y_d' - Y_d] (nonpositive).
/// Degrees at or above m connect with probability 1.
pub fn markov_step_expectation(state: &MarkovState, m: usize) -> Vec<f64> {
    let mf = m as f64;
    let mut lower = 0.0f64; // running log prod_{d' < d} (1-d'/m)^{Y_{d'}}
    let mut out = Vec::with_capacity(state.degrees.len());
    for (&d, &y) in state.degrees.iter().zip(&state.counts) {
        let p = (d / mf).min(1.0);
        let y_lnq = if y == 0.0 { 0.0 } else { y * (-p).ln_1p() };
        let hit = -f64::exp_m1(y_lnq);
        out.push(-hit * lower.exp());
        lower += y_lnq;
    }
    out
}
