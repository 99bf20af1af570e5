//! The analytic engine: closed-form solutions of the differential-equation
//! model for MinPredictedDegree, expectation bounds on the maximum matching,
//! and the ratio computations built from both.

pub mod asymptotic;
pub mod closed_form;
pub mod concentration;
pub mod hall;
pub mod markov;
pub mod numeric;
pub mod ode;

pub use asymptotic::{asymptotic_hall_bound, asymptotic_mpd_fraction, asymptotic_solution};
pub use closed_form::{closed_form_solution, expected_mpd_size, AnalyticSolution};
pub use concentration::{concentration_check, ConcentrationReport};
pub use hall::{hall_expectation, hall_expectation_parts};
pub use markov::{markov_step_expectation, MarkovState};
pub use ode::integrate_z;

use thiserror::Error;

use crate::generators::{DegreeProfile, ProfileError};

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("expected degree {delta} must be below m = {m}")]
    DegreeAtLeastM { delta: f64, m: usize },
    #[error("inclusion-exclusion cancellation overflow at node {node}, degree window {delta}")]
    CancellationOverflow { node: usize, delta: usize },
    #[error("invalid markov state: {0}")]
    InvalidMarkovState(String),
    #[error("concentration check needs at least 30 results, got {0}")]
    TooFewResults(usize),
}

/// Which engine evaluates a ratio: the finite-size model at (n, m) or the
/// n = m -> infinity limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticMode {
    Finite { n: usize, m: usize },
    Asymptotic,
}

/// Ratio of the expected MinPredictedDegree matching size to the Hall
/// expectation bound on the expected maximum matching; a lower bound on the
/// true expectation ratio. Degenerate profiles (no positive-degree mass, or
/// a 0/0 ratio) evaluate to 1 by convention.
pub fn analytic_ratio(profile: &DegreeProfile, mode: AnalyticMode) -> Result<f64, AnalysisError> {
    let effectively_empty = profile
        .class_fractions()?
        .iter()
        .all(|&(delta, lam)| delta <= 0.0 || lam <= 0.0);
    if effectively_empty {
        return Ok(1.0);
    }
    let (num, den) = match mode {
        AnalyticMode::Finite { n, m } => (
            expected_mpd_size(profile, n, m)?,
            hall_expectation(profile, n, m)?,
        ),
        AnalyticMode::Asymptotic => {
            (asymptotic_mpd_fraction(profile)?, asymptotic_hall_bound(profile)?)
        }
    };
    if num == 0.0 && den == 0.0 {
        return Ok(1.0);
    }
    Ok(num / den)
}
