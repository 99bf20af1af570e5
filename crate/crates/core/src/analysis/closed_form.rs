//! Closed-form solution of the differential-equation model for
//! MinPredictedDegree on expected-degree random graphs.
//!
//! For degree classes delta_1 < ... < delta_l with masses f_i, the scaled
//! unmatched counts z_i(t) = -k_i * Y_i(t) solve
//!
//!   dz_i/dt = k_i (1 - e^{z_i}) * exp(sum_{i' < i} z_{i'}),  z_i(0) = -k_i f_i,
//!
//! and the solution chains through constants C_i and auxiliary functions
//! alpha_i(t). All chain arithmetic here runs in log space: the alpha values
//! grow like e^{k t} and overflow f64 well inside realistic horizons.

use serde::{Deserialize, Serialize};

use crate::analysis::numeric::{log_expm1, logaddexp, softplus};
use crate::analysis::AnalysisError;
use crate::generators::DegreeProfile;

/// An evaluable solution of the z system for one degree profile.
///
/// `masses` are node counts with horizon `m` in the finite model, or
/// fractions with horizon 1 in the asymptotic model; `rates` hold the
/// matching rates k_i. Classes with zero degree or zero mass are dropped at
/// construction (they never match and contribute nothing to the system).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSolution {
    pub deltas: Vec<f64>,
    pub masses: Vec<f64>,
    pub rates: Vec<f64>,
    pub ln_c: Vec<f64>,
    pub horizon: f64,
}

impl AnalyticSolution {
    /// Builds the constant chain from per-class (degree, mass, rate).
    /// Callers guarantee deltas ascending, masses > 0, rates > 0.
    pub(crate) fn build(deltas: Vec<f64>, masses: Vec<f64>, rates: Vec<f64>, horizon: f64) -> Self {
        let ell = deltas.len();
        let mut ln_c = vec![0.0; ell];
        if ell > 0 {
            ln_c[0] = log_expm1(rates[0] * masses[0]);
            // log alpha_{i+1}(0), chained as each C_i is fixed
            let mut a0 = logaddexp(ln_c[0], 0.0);
            for i in 1..ell {
                let r = rates[i] / rates[i - 1];
                ln_c[i] = r * a0 + log_expm1(rates[i] * masses[i]);
                if i + 1 < ell {
                    a0 = logaddexp(r * a0, ln_c[i]);
                }
            }
        }
        AnalyticSolution { deltas, masses, rates, ln_c, horizon }
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// All z_i(t) in one pass over the class chain.
    pub fn z_all(&self, t: f64) -> Vec<f64> {
        let ell = self.len();
        let mut z = vec![0.0; ell];
        if ell == 0 {
            return z;
        }
        let k = &self.rates;
        z[0] = -softplus(self.ln_c[0] - k[0] * t);
        if ell == 1 {
            return z;
        }
        let mut at = logaddexp(self.ln_c[0], k[0] * t);
        for i in 1..ell {
            let r = k[i] / k[i - 1];
            z[i] = -softplus(self.ln_c[i] - r * at);
            if i + 1 < ell {
                at = logaddexp(r * at, self.ln_c[i]);
            }
        }
        z
    }

    /// z for one class; linear in the class index, use `z_all` for sweeps.
    pub fn z(&self, i: usize, t: f64) -> f64 {
        self.z_all(t)[i]
    }

    /// Expected matched mass at the end of the horizon:
    /// sum_i (f_i + z_i(horizon) / k_i).
    pub fn expected_matched(&self) -> f64 {
        let z = self.z_all(self.horizon);
        let mut total = 0.0;
        for i in 0..self.len() {
            total += self.masses[i] + z[i] / self.rates[i];
        }
        total
    }
}

/// Finite-size solution: rates k = -log(1 - delta/m), masses are node
/// counts out of `n`, horizon m.
pub fn closed_form_solution(
    profile: &DegreeProfile,
    n: usize,
    m: usize,
) -> Result<AnalyticSolution, AnalysisError> {
    let classes = profile.class_counts(n)?;
    let mut deltas = Vec::new();
    let mut masses = Vec::new();
    let mut rates = Vec::new();
    for (delta, count) in classes {
        if delta <= 0.0 || count <= 0.0 {
            continue;
        }
        if delta >= m as f64 {
            return Err(AnalysisError::DegreeAtLeastM { delta, m });
        }
        deltas.push(delta);
        masses.push(count);
        rates.push(-(-delta / m as f64).ln_1p());
    }
    Ok(AnalyticSolution::build(deltas, masses, rates, m as f64))
}

/// Expected MinPredictedDegree matching size under the finite model.
pub fn expected_mpd_size(profile: &DegreeProfile, n: usize, m: usize) -> Result<f64, AnalysisError> {
    Ok(closed_form_solution(profile, n, m)?.expected_matched())
}
