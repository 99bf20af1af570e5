//! Expected-degree profiles: the inputs shared by the random graph models
//! and the analytic engine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::numeric::kahan_sum;

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("per-node profile: degree {value} at index {index} outside [0, {m}]")]
    DegreeOutOfRange { index: usize, value: f64, m: usize },
    #[error("per-node profile: degree at index {index} is negative or not finite")]
    BadDegree { index: usize },
    #[error("grouped profile: degrees must be finite, nonnegative and strictly increasing")]
    BadGroupedDegrees,
    #[error("grouped profile: fractions must be positive and sum to 1, got sum {sum}")]
    BadFractions { sum: f64 },
    #[error("per-node profile has {got} entries, expected {want}")]
    WrongLength { got: usize, want: usize },
    #[error("{0} requires a per-node profile")]
    PerNodeRequired(&'static str),
    #[error("{0}")]
    InvalidParam(String),
}

/// Expected degrees of the offline side, either one value per node or
/// grouped into unique-degree classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DegreeProfile {
    /// expected degree of every offline node, in node order
    PerNode(Vec<f64>),
    /// (unique expected degree, fraction of offline nodes), degrees ascending,
    /// fractions summing to 1
    Grouped(Vec<(f64, f64)>),
}

const FRACTION_SUM_TOL: f64 = 1e-6;

impl DegreeProfile {
    /// The per-node degree vector, or an error naming `caller` for grouped
    /// profiles.
    pub fn per_node(&self, caller: &'static str) -> Result<&[f64], ProfileError> {
        match self {
            DegreeProfile::PerNode(d) => {
                for (index, &x) in d.iter().enumerate() {
                    if !(x.is_finite() && x >= 0.0) {
                        return Err(ProfileError::BadDegree { index });
                    }
                }
                Ok(d)
            }
            DegreeProfile::Grouped(_) => Err(ProfileError::PerNodeRequired(caller)),
        }
    }

    /// Checks every degree lies in [0, m].
    pub fn validate_for_m(&self, m: usize) -> Result<(), ProfileError> {
        let check = |index: usize, value: f64| {
            if !(value.is_finite() && (0.0..=m as f64).contains(&value)) {
                Err(ProfileError::DegreeOutOfRange { index, value, m })
            } else {
                Ok(())
            }
        };
        match self {
            DegreeProfile::PerNode(d) => d.iter().enumerate().try_for_each(|(i, &x)| check(i, x)),
            DegreeProfile::Grouped(c) => {
                c.iter().enumerate().try_for_each(|(i, &(x, _))| check(i, x))
            }
        }
    }

    /// Unique (degree, fraction) classes, degrees ascending, fractions
    /// summing to 1. Validates grouped invariants; groups per-node values.
    pub fn class_fractions(&self) -> Result<Vec<(f64, f64)>, ProfileError> {
        match self {
            DegreeProfile::PerNode(d) => {
                let counts = group_per_node(d)?;
                let n = d.len() as f64;
                Ok(counts.into_iter().map(|(delta, c)| (delta, c / n)).collect())
            }
            DegreeProfile::Grouped(classes) => {
                let mut prev = f64::NEG_INFINITY;
                for &(delta, lam) in classes {
                    if !(delta.is_finite() && delta >= 0.0 && delta > prev) {
                        return Err(ProfileError::BadGroupedDegrees);
                    }
                    if !(lam.is_finite() && lam > 0.0) {
                        return Err(ProfileError::BadFractions { sum: f64::NAN });
                    }
                    prev = delta;
                }
                let sum = kahan_sum(classes.iter().map(|&(_, lam)| lam));
                if classes.is_empty() {
                    return Ok(Vec::new());
                }
                if (sum - 1.0).abs() > FRACTION_SUM_TOL {
                    return Err(ProfileError::BadFractions { sum });
                }
                Ok(classes.clone())
            }
        }
    }

    /// Unique (degree, node count) classes for a population of `n` offline
    /// nodes. Per-node profiles must have exactly `n` entries and yield
    /// exact integer counts; grouped profiles scale fractions by `n`.
    pub fn class_counts(&self, n: usize) -> Result<Vec<(f64, f64)>, ProfileError> {
        match self {
            DegreeProfile::PerNode(d) => {
                if d.len() != n {
                    return Err(ProfileError::WrongLength { got: d.len(), want: n });
                }
                group_per_node(d)
            }
            DegreeProfile::Grouped(_) => {
                let fractions = self.class_fractions()?;
                Ok(fractions.into_iter().map(|(delta, lam)| (delta, lam * n as f64)).collect())
            }
        }
    }
}

fn group_per_node(d: &[f64]) -> Result<Vec<(f64, f64)>, ProfileError> {
    for (index, &x) in d.iter().enumerate() {
        if !(x.is_finite() && x >= 0.0) {
            return Err(ProfileError::BadDegree { index });
        }
    }
    let mut sorted = d.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for &x in &sorted {
        match out.last_mut() {
            Some((delta, count)) if *delta == x => *count += 1.0,
            _ => out.push((x, 1.0)),
        }
    }
    Ok(out)
}

/// Zipf expected degrees d_i = C * i^(-alpha), i = 1..n.
pub fn zipf_profile(n: usize, c: f64, alpha: f64) -> Result<DegreeProfile, ProfileError> {
    if n == 0 {
        return Err(ProfileError::InvalidParam("zipf profile needs n >= 1".into()));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(ProfileError::InvalidParam(format!("zipf C must be positive, got {c}")));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(ProfileError::InvalidParam(format!("zipf alpha must be >= 0, got {alpha}")));
    }
    Ok(DegreeProfile::PerNode(
        (1..=n).map(|i| c * (i as f64).powf(-alpha)).collect(),
    ))
}

/// Power law with exponential cutoff: grouped profile with degree-d mass
/// proportional to d^(-alpha) * e^(-d/lambda) for d = 1, 2, ...; the series
/// is truncated at the smallest D whose geometric tail bound drops below
/// `tail_eps` of the total, then renormalized.
pub fn expcutoff_profile(alpha: f64, lambda: f64, tail_eps: f64) -> Result<DegreeProfile, ProfileError> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(ProfileError::InvalidParam(format!("cutoff alpha must be >= 0, got {alpha}")));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ProfileError::InvalidParam(format!("cutoff lambda must be > 0, got {lambda}")));
    }
    if !(tail_eps > 0.0 && tail_eps < 1.0) {
        return Err(ProfileError::InvalidParam(format!(
            "tail_eps must be in (0, 1), got {tail_eps}"
        )));
    }
    // w_{d+1}/w_d = ((d+1)/d)^(-alpha) e^(-1/lambda) <= rho, so the tail past
    // d is at most w_d * rho/(1-rho)
    let rho = (-1.0 / lambda).exp();
    let geo = rho / (1.0 - rho);
    let mut weights: Vec<f64> = Vec::new();
    let mut partial = 0.0;
    let mut comp = 0.0;
    loop {
        let d = (weights.len() + 1) as f64;
        let w = (-alpha * d.ln() - d / lambda).exp();
        weights.push(w);
        let t = partial + w;
        comp += if partial.abs() >= w { (partial - t) + w } else { (w - t) + partial };
        partial = t;
        if w * geo < tail_eps * (partial + comp) {
            break;
        }
    }
    let total = partial + comp;
    Ok(DegreeProfile::Grouped(
        weights
            .iter()
            .enumerate()
            .map(|(i, &w)| ((i + 1) as f64, w / total))
            .collect(),
    ))
}
