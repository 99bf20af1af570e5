//! Online bipartite matching with degree predictions.
//!
//! The offline side of a bipartite graph is known upfront; online nodes
//! arrive one at a time with their incident edges and must be matched
//! immediately and irrevocably. This crate provides:
//!
//! * [`graph`]: the graph, predictor, and matching types plus the
//!   arrival-driver [`graph::run_online`] shared by every policy.
//! * [`algorithms`]: the MinPredictedDegree policy and baselines
//!   (MinDegree, Ranking, random greedy, and an augmentation combinator).
//! * [`generators`]: random graph models (bipartite Chung-Lu, type graphs
//!   via Molloy-Reed and preferential attachment), degree profiles,
//!   predictors, and edge-list ingestion.
//! * [`oracle`]: exact maximum matchings (Hopcroft-Karp, brute force) and
//!   the empirical Hall-deficiency upper bound.
//! * [`analysis`]: closed-form solutions of the differential-equation model
//!   for MinPredictedDegree, expectation bounds for the maximum matching,
//!   and analytic competitive-ratio estimates, in finite and asymptotic
//!   regimes.
//! * [`harness`]: seeded multi-trial experiment runner, analytic grid
//!   evaluation, snapshot pipelines, and CSV/JSON emission behind the
//!   `mpdmatch` command-line tool.
//!
//! All randomness flows through [`graph::TrialSeed`], so every experiment is
//! reproducible from a master seed and a trial index.

pub mod algorithms;
pub mod analysis;
pub mod fixtures;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod oracle;
