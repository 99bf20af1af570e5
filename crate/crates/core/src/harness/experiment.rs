//! Seeded trial batches: sample a graph, run every configured algorithm on
//! the same arrival sequence, and score against the exact oracles.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::algorithms::algorithm_by_name;
use crate::analysis::numeric::kahan_sum;
use crate::generators::{
    bipartite_double_cover, clvb_sample, known_iid_sample, load_edge_list, load_undirected_edges,
    molloy_reed_typegraph, pref_attachment_typegraph, subsample_predictor, TypeGraph,
};
use crate::graph::{
    matching_size, predictor_l2_error, run_online, BipartiteGraph, DegreePredictor, StreamKind,
    TrialSeed,
};
use crate::oracle::{hall_subset, max_matching};

use super::config::{ExperimentConfig, GeneratorSpec, PredictorSpec};
use super::HarnessError;

/// Reserved trial index for one-off structures shared by every trial, such as
/// type graphs. Regular trials count up from zero and never reach it.
const SHARED_STRUCTURE_TRIAL: u64 = u64::MAX;

/// Outcome of a single trial. `sizes` is positional, matching the configured
/// algorithm list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub sizes: Vec<usize>,
    pub max_matching: usize,
    pub hall_bound: usize,
    pub l2_error: f64,
    pub wall_ms: f64,
    pub edgeless: bool,
}

impl TrialRecord {
    /// Competitive ratio against the offline optimum; an edgeless instance
    /// counts as ratio 1 by convention.
    pub fn ratio(&self, algo_index: usize) -> f64 {
        if self.max_matching == 0 {
            1.0
        } else {
            self.sizes[algo_index] as f64 / self.max_matching as f64
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub name: String,
    pub mean_ratio: f64,
    pub std_ratio: f64,
    pub mean_size: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub trials: usize,
    pub master_seed: u64,
    pub edgeless_trials: usize,
    pub algorithms: Vec<AlgorithmSummary>,
    pub records: Vec<TrialRecord>,
}

/// Graph source with all trial-independent work already done.
enum Prepared {
    Clvb { profile: crate::generators::DegreeProfile, m: usize },
    TypeGraph { t: TypeGraph, m_hat: usize },
    Fixed { graph: BipartiteGraph },
}

impl Prepared {
    fn build(spec: &GeneratorSpec, master_seed: u64) -> Result<Self, HarnessError> {
        let shared = TrialSeed::new(master_seed, SHARED_STRUCTURE_TRIAL);
        match spec {
            GeneratorSpec::Clvb { profile, n, m } => {
                let profile = profile.build(*n)?;
                profile.per_node("clvb generator")?;
                profile.validate_for_m(*m)?;
                Ok(Prepared::Clvb { profile, m: *m })
            }
            GeneratorSpec::MolloyReed { profile, n, m, m_hat } => {
                let profile = profile.build(*n)?;
                let t = molloy_reed_typegraph(*n, *m, &profile, shared)?;
                Ok(Prepared::TypeGraph { t, m_hat: *m_hat })
            }
            GeneratorSpec::PrefAttachment { n, m, edges, m_hat } => {
                let t = pref_attachment_typegraph(*n, *m, *edges, shared)?;
                Ok(Prepared::TypeGraph { t, m_hat: *m_hat })
            }
            GeneratorSpec::EdgeList { path } => {
                let loaded = load_edge_list(path)?;
                Ok(Prepared::Fixed { graph: loaded.graph })
            }
            GeneratorSpec::DoubleCover { path } => {
                let (edges, n) = load_undirected_edges(path)?;
                Ok(Prepared::Fixed { graph: bipartite_double_cover(&edges, n)? })
            }
        }
    }

    fn sample(
        &self,
        seed: TrialSeed,
    ) -> Result<(BipartiteGraph, Option<DegreePredictor>), HarnessError> {
        match self {
            Prepared::Clvb { profile, m } => Ok((clvb_sample(profile, *m, seed)?, None)),
            Prepared::TypeGraph { t, m_hat } => {
                let (g, sigma) = known_iid_sample(t, *m_hat, seed)?;
                Ok((g, Some(sigma)))
            }
            Prepared::Fixed { graph } => Ok((graph.clone(), None)),
        }
    }
}

fn check_predictor_availability(cfg: &ExperimentConfig) -> Result<(), HarnessError> {
    match (&cfg.predictor, &cfg.generator) {
        (PredictorSpec::Expected, GeneratorSpec::Clvb { .. }) => Ok(()),
        (PredictorSpec::Expected, _) => Err(HarnessError::PredictorUnavailable(
            "expected degrees come from the clvb generator profile".to_string(),
        )),
        (
            PredictorSpec::Generator,
            GeneratorSpec::MolloyReed { .. } | GeneratorSpec::PrefAttachment { .. },
        ) => Ok(()),
        (PredictorSpec::Generator, _) => Err(HarnessError::PredictorUnavailable(
            "the generator predictor needs a type-graph generator (molloy-reed or \
             pref-attachment)"
                .to_string(),
        )),
        _ => Ok(()),
    }
}

fn validate_algorithm_names(names: &[String]) -> Result<(), HarnessError> {
    let probe = BipartiteGraph::new(0, Vec::new());
    let sigma = DegreePredictor::new(Vec::new());
    for name in names {
        algorithm_by_name(name, &probe, &sigma)?;
    }
    Ok(())
}

/// Samples the graph a given trial of `cfg` would see, in natural arrival
/// order. Used by the `generate` subcommand to export instances.
pub fn generate_graph(cfg: &ExperimentConfig, trial: u64) -> Result<BipartiteGraph, HarnessError> {
    let prepared = Prepared::build(&cfg.generator, cfg.master_seed)?;
    let (g, _) = prepared.sample(TrialSeed::new(cfg.master_seed, trial))?;
    Ok(g)
}

/// Runs the full trial batch, in parallel over trials, and aggregates
/// per-algorithm ratio statistics.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".to_string()));
    }
    validate_algorithm_names(&cfg.algorithms)?;
    check_predictor_availability(cfg)?;
    let prepared = Prepared::build(&cfg.generator, cfg.master_seed)?;

    let expected_sigma: Option<Vec<f64>> = match (&cfg.predictor, &cfg.generator) {
        (PredictorSpec::Expected, GeneratorSpec::Clvb { profile, n, .. }) => {
            Some(profile.build(*n)?.per_node("expected predictor")?.to_vec())
        }
        _ => None,
    };

    let records: Result<Vec<TrialRecord>, HarnessError> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let start = Instant::now();
            let seed = TrialSeed::new(cfg.master_seed, trial);
            let (mut g, gen_sigma) = prepared.sample(seed)?;
            if cfg.shuffle_arrivals {
                let mut rng = seed.rng(StreamKind::ArrivalShuffle);
                g.shuffle_arrivals(&mut rng);
            }
            let sigma = match &cfg.predictor {
                PredictorSpec::TrueDegrees => DegreePredictor::perfect(&g),
                PredictorSpec::Expected => DegreePredictor::new(
                    expected_sigma.clone().expect("availability checked up front"),
                ),
                PredictorSpec::Subsample { fraction } => {
                    subsample_predictor(&g, *fraction, seed)?
                }
                PredictorSpec::Generator => {
                    gen_sigma.expect("availability checked up front")
                }
            };
            sigma.validate(g.n_offline)?;
            let l2_error = predictor_l2_error(&sigma, &g);

            let mut sizes = Vec::with_capacity(cfg.algorithms.len());
            for name in &cfg.algorithms {
                let mut algo = algorithm_by_name(name, &g, &sigma)?;
                let matching = run_online(&g, algo.as_mut(), seed)?;
                sizes.push(matching_size(&matching));
            }
            let mx = max_matching(&g);
            let hall = hall_subset(&g).bound;
            for (name, &size) in cfg.algorithms.iter().zip(&sizes) {
                if !(size <= mx && mx <= hall) {
                    return Err(HarnessError::InvariantViolation {
                        trial,
                        algorithm: name.clone(),
                        size,
                        max: mx,
                        hall,
                    });
                }
            }
            Ok(TrialRecord {
                trial_index: trial,
                sizes,
                max_matching: mx,
                hall_bound: hall,
                l2_error,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
                edgeless: mx == 0,
            })
        })
        .collect();
    let records = records?;

    let len = records.len() as f64;
    let mut algorithms = Vec::with_capacity(cfg.algorithms.len());
    for (ai, name) in cfg.algorithms.iter().enumerate() {
        let mean_ratio = kahan_sum(records.iter().map(|r| r.ratio(ai))) / len;
        let var =
            kahan_sum(records.iter().map(|r| (r.ratio(ai) - mean_ratio).powi(2))) / len;
        let mean_size = kahan_sum(records.iter().map(|r| r.sizes[ai] as f64)) / len;
        algorithms.push(AlgorithmSummary {
            name: name.clone(),
            mean_ratio,
            std_ratio: var.max(0.0).sqrt(),
            mean_size,
        });
    }
    Ok(ExperimentSummary {
        trials: cfg.trials,
        master_seed: cfg.master_seed,
        edgeless_trials: records.iter().filter(|r| r.edgeless).count(),
        algorithms,
        records,
    })
}
