//! Online matching policies.
//!
//! Every policy implements [`OnlineAlgorithm`]: the driver offers each
//! arriving online node's unmatched neighbors and the policy picks one or
//! skips. Policies hold per-run mutable state (drawn costs, tie priorities)
//! and are not shared across concurrent runs; the constructors here are
//! cheap and called once per run.

use rand::{Rng, RngCore};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::graph::{BipartiteGraph, DegreePredictor, OnlineAlgorithm};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown algorithm \"{0}\"")]
pub struct UnknownAlgorithm(pub String);

/// Greedy policy matching each arrival to the unmatched neighbor with the
/// smallest predicted degree.
///
/// Ties in predicted degree are broken by a per-run random priority drawn
/// before the first arrival, then by offline index, so a run consumes tied
/// nodes in one fixed random order.
pub struct MinPredictedDegree {
    sigma: Vec<f64>,
    tie: Vec<u64>,
}

pub fn min_predicted_degree(sigma: &DegreePredictor) -> MinPredictedDegree {
    MinPredictedDegree { sigma: sigma.sigma.clone(), tie: Vec::new() }
}

/// MinPredictedDegree fed the true offline degrees.
pub fn min_degree(g: &BipartiteGraph) -> MinPredictedDegree {
    min_predicted_degree(&DegreePredictor::perfect(g))
}

impl OnlineAlgorithm for MinPredictedDegree {
    fn begin_run(&mut self, n_offline: usize, rng: &mut ChaCha12Rng) {
        assert_eq!(
            self.sigma.len(),
            n_offline,
            "predictor covers {} offline nodes, graph has {}",
            self.sigma.len(),
            n_offline
        );
        self.tie = (0..n_offline).map(|_| rng.next_u64()).collect();
    }

    fn choose(&mut self, _online: u32, candidates: &[u32], _rng: &mut ChaCha12Rng) -> Option<u32> {
        candidates.iter().copied().min_by(|&a, &b| {
            self.sigma[a as usize]
                .total_cmp(&self.sigma[b as usize])
                .then(self.tie[a as usize].cmp(&self.tie[b as usize]))
                .then(a.cmp(&b))
        })
    }
}

/// The classic randomized policy: each offline node draws a uniform cost at
/// the start of the run and every arrival matches its cheapest unmatched
/// neighbor.
pub struct Ranking {
    cost: Vec<f64>,
}

pub fn ranking() -> Ranking {
    Ranking { cost: Vec::new() }
}

impl OnlineAlgorithm for Ranking {
    fn begin_run(&mut self, n_offline: usize, rng: &mut ChaCha12Rng) {
        self.cost = (0..n_offline).map(|_| rng.random::<f64>()).collect();
    }

    fn choose(&mut self, _online: u32, candidates: &[u32], _rng: &mut ChaCha12Rng) -> Option<u32> {
        candidates.iter().copied().min_by(|&a, &b| {
            self.cost[a as usize].total_cmp(&self.cost[b as usize]).then(a.cmp(&b))
        })
    }
}

/// Matches each arrival to a uniformly random unmatched neighbor.
pub struct RandomGreedy;

pub fn random_greedy() -> RandomGreedy {
    RandomGreedy
}

impl OnlineAlgorithm for RandomGreedy {
    fn choose(&mut self, _online: u32, candidates: &[u32], rng: &mut ChaCha12Rng) -> Option<u32> {
        Some(candidates[rng.random_range(0..candidates.len())])
    }
}

/// Wraps a base policy, replaying it unmodified, and applies the
/// MinPredictedDegree rule whenever the base skips an arrival that still has
/// unmatched neighbors. A base decision to match is never overridden.
pub struct MpdAugment {
    base: Box<dyn OnlineAlgorithm>,
    fallback: MinPredictedDegree,
}

pub fn mpd_augment(base: Box<dyn OnlineAlgorithm>, sigma: &DegreePredictor) -> MpdAugment {
    MpdAugment { base, fallback: min_predicted_degree(sigma) }
}

impl OnlineAlgorithm for MpdAugment {
    fn begin_run(&mut self, n_offline: usize, rng: &mut ChaCha12Rng) {
        self.base.begin_run(n_offline, rng);
        self.fallback.begin_run(n_offline, rng);
    }

    fn choose(&mut self, online: u32, candidates: &[u32], rng: &mut ChaCha12Rng) -> Option<u32> {
        match self.base.choose(online, candidates, rng) {
            Some(u) => Some(u),
            None => self.fallback.choose(online, candidates, rng),
        }
    }
}

/// Builds a policy from its CLI name: `mpd`, `mindegree`, `ranking`,
/// `greedy`, or `mpd-augment:<base>` (the base name may itself be any of
/// these forms).
pub fn algorithm_by_name(
    name: &str,
    g: &BipartiteGraph,
    sigma: &DegreePredictor,
) -> Result<Box<dyn OnlineAlgorithm>, UnknownAlgorithm> {
    match name {
        "mpd" => Ok(Box::new(min_predicted_degree(sigma))),
        "mindegree" => Ok(Box::new(min_degree(g))),
        "ranking" => Ok(Box::new(ranking())),
        "greedy" => Ok(Box::new(random_greedy())),
        other => match other.strip_prefix("mpd-augment:") {
            Some(base) => {
                let base = algorithm_by_name(base, g, sigma)?;
                Ok(Box::new(mpd_augment(base, sigma)))
            }
            None => Err(UnknownAlgorithm(other.to_string())),
        },
    }
}
