//! Bipartite graph, predictor, and matching types plus the online-arrival
//! driver shared by all algorithms.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("online node {online}: adjacency index {index} out of range (n_offline = {n_offline})")]
    IndexOutOfRange { online: u32, index: u32, n_offline: usize },
    #[error("online node {online}: duplicate edge to offline node {index}")]
    DuplicateEdge { online: u32, index: u32 },
    #[error("arrival_order is not a permutation of 0..{m_online}")]
    BadArrivalOrder { m_online: usize },
    #[error("predictor has {got} entries, graph has {want} offline nodes")]
    PredictorSizeMismatch { got: usize, want: usize },
    #[error("predictor value for offline node {index} is negative or not finite")]
    PredictorValueInvalid { index: u32 },
    #[error("algorithm chose offline node {index} for online node {online}, not an offered candidate")]
    ContractViolation { online: u32, index: u32 },
}

/// Bipartite graph with a fixed offline side and an ordered online side.
///
/// `adjacency[v]` lists the offline neighbors revealed when online node `v`
/// arrives. `arrival_order` controls the order of arrivals and is the
/// identity permutation unless shuffled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteGraph {
    pub n_offline: usize,
    pub m_online: usize,
    pub adjacency: Vec<Vec<u32>>,
    pub arrival_order: Vec<u32>,
}

impl BipartiteGraph {
    /// Builds a graph with identity arrival order. `adjacency.len()` fixes
    /// the online side.
    pub fn new(n_offline: usize, adjacency: Vec<Vec<u32>>) -> Self {
        let m_online = adjacency.len();
        BipartiteGraph {
            n_offline,
            m_online,
            adjacency,
            arrival_order: (0..m_online as u32).collect(),
        }
    }

    /// True degree of every offline node.
    pub fn offline_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n_offline];
        for nbrs in &self.adjacency {
            for &u in nbrs {
                deg[u as usize] += 1;
            }
        }
        deg
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    /// Adjacency transposed to per-offline-node lists.
    pub fn offline_adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n_offline];
        for (v, nbrs) in self.adjacency.iter().enumerate() {
            for &u in nbrs {
                adj[u as usize].push(v as u32);
            }
        }
        adj
    }

    /// Randomizes the arrival order in place.
    pub fn shuffle_arrivals(&mut self, rng: &mut ChaCha12Rng) {
        use rand::seq::SliceRandom;
        self.arrival_order.shuffle(rng);
    }
}

/// Checks every structural invariant, reporting the first violation.
pub fn validate_graph(g: &BipartiteGraph) -> Result<(), GraphError> {
    if g.adjacency.len() != g.m_online {
        return Err(GraphError::BadArrivalOrder { m_online: g.m_online });
    }
    let mut stamp = vec![u32::MAX; g.n_offline];
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        for &u in nbrs {
            if (u as usize) >= g.n_offline {
                return Err(GraphError::IndexOutOfRange {
                    online: v as u32,
                    index: u,
                    n_offline: g.n_offline,
                });
            }
            if stamp[u as usize] == v as u32 {
                return Err(GraphError::DuplicateEdge { online: v as u32, index: u });
            }
            stamp[u as usize] = v as u32;
        }
    }
    if g.arrival_order.len() != g.m_online {
        return Err(GraphError::BadArrivalOrder { m_online: g.m_online });
    }
    let mut seen = vec![false; g.m_online];
    for &v in &g.arrival_order {
        if (v as usize) >= g.m_online || seen[v as usize] {
            return Err(GraphError::BadArrivalOrder { m_online: g.m_online });
        }
        seen[v as usize] = true;
    }
    Ok(())
}

/// Map from offline node to a nonnegative predicted degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreePredictor {
    pub sigma: Vec<f64>,
}

impl DegreePredictor {
    pub fn new(sigma: Vec<f64>) -> Self {
        DegreePredictor { sigma }
    }

    /// The perfect predictor: true offline degrees.
    pub fn perfect(g: &BipartiteGraph) -> Self {
        DegreePredictor { sigma: g.offline_degrees().iter().map(|&d| d as f64).collect() }
    }

    pub fn validate(&self, n_offline: usize) -> Result<(), GraphError> {
        if self.sigma.len() != n_offline {
            return Err(GraphError::PredictorSizeMismatch { got: self.sigma.len(), want: n_offline });
        }
        for (u, &s) in self.sigma.iter().enumerate() {
            if !(s.is_finite() && s >= 0.0) {
                return Err(GraphError::PredictorValueInvalid { index: u as u32 });
            }
        }
        Ok(())
    }
}

/// sqrt of the summed squared prediction error against true degrees.
pub fn predictor_l2_error(sigma: &DegreePredictor, g: &BipartiteGraph) -> f64 {
    let deg = g.offline_degrees();
    sigma
        .sigma
        .iter()
        .zip(deg.iter())
        .map(|(&s, &d)| {
            let e = s - d as f64;
            e * e
        })
        .sum::<f64>()
        .sqrt()
}

/// Set of disjoint (offline, online) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub pairs: Vec<(u32, u32)>,
}

pub fn matching_size(m: &Matching) -> usize {
    m.pairs.len()
}

impl Matching {
    /// Disjointness on both sides plus every pair being an edge of `g`.
    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        let mut off = vec![false; g.n_offline];
        let mut on = vec![false; g.m_online];
        for &(u, v) in &self.pairs {
            let (ui, vi) = (u as usize, v as usize);
            if ui >= g.n_offline || vi >= g.m_online || off[ui] || on[vi] {
                return false;
            }
            if !g.adjacency[vi].contains(&u) {
                return false;
            }
            off[ui] = true;
            on[vi] = true;
        }
        true
    }
}

/// Reproducible randomness for one trial of an experiment.
///
/// Distinct `(master_seed, trial_index)` pairs key distinct ChaCha streams.
/// Within a trial, each purpose (graph sampling, predictor noise, arrival
/// shuffling, algorithm decisions) draws from its own stream so that, for
/// example, regenerating a predictor never perturbs the sampled graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialSeed {
    pub master_seed: u64,
    pub trial_index: u64,
}

/// Purpose label selecting one of a trial's independent random streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamKind {
    GraphGen = 1,
    Predictor = 2,
    ArrivalShuffle = 3,
    Algorithm = 4,
}

impl TrialSeed {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        TrialSeed { master_seed, trial_index }
    }

    /// Deterministic generator for one purpose within this trial.
    pub fn rng(self, kind: StreamKind) -> ChaCha12Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.trial_index.to_le_bytes());
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(kind as u64);
        rng
    }
}

/// An online matching policy.
///
/// The driver offers each arriving node's unmatched neighbors; the policy
/// picks one of them or skips. Implementations never see future arrivals.
pub trait OnlineAlgorithm {
    /// Called once per run before any arrival, with this run's random stream.
    fn begin_run(&mut self, _n_offline: usize, _rng: &mut ChaCha12Rng) {}

    /// Picks one of `candidates` (never empty) or returns `None` to skip.
    fn choose(&mut self, online: u32, candidates: &[u32], rng: &mut ChaCha12Rng) -> Option<u32>;
}

/// Processes online nodes in arrival order, offering each node's unmatched
/// neighbors to `algo`, and accumulates the matching.
///
/// Decisions are irrevocable. A returned node that was not offered is a
/// contract violation and aborts the run.
pub fn run_online(
    g: &BipartiteGraph,
    algo: &mut dyn OnlineAlgorithm,
    seed: TrialSeed,
) -> Result<Matching, GraphError> {
    let mut rng = seed.rng(StreamKind::Algorithm);
    algo.begin_run(g.n_offline, &mut rng);
    let mut matched = vec![false; g.n_offline];
    let mut pairs = Vec::new();
    let mut candidates: Vec<u32> = Vec::new();
    for &v in &g.arrival_order {
        candidates.clear();
        candidates.extend(
            g.adjacency[v as usize].iter().copied().filter(|&u| !matched[u as usize]),
        );
        if candidates.is_empty() {
            continue;
        }
        if let Some(u) = algo.choose(v, &candidates, &mut rng) {
            if !candidates.contains(&u) {
                return Err(GraphError::ContractViolation { online: v, index: u });
            }
            matched[u as usize] = true;
            pairs.push((u, v));
        }
    }
    Ok(Matching { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{min_predicted_degree, random_greedy};
    use crate::fixtures::half_competitive_instance;
    use rand::RngCore;

    fn seed(t: u64) -> TrialSeed {
        TrialSeed::new(7, t)
    }

    #[test]
    fn empty_graph_is_valid() {
        let g = BipartiteGraph::new(0, vec![]);
        assert!(validate_graph(&g).is_ok());
    }

    #[test]
    fn out_of_range_index_rejected() {
        let g = BipartiteGraph::new(2, vec![vec![0, 2]]);
        assert_eq!(
            validate_graph(&g),
            Err(GraphError::IndexOutOfRange { online: 0, index: 2, n_offline: 2 })
        );
    }

    #[test]
    fn duplicate_edge_rejected() {
        let g = BipartiteGraph::new(3, vec![vec![1, 1]]);
        assert_eq!(validate_graph(&g), Err(GraphError::DuplicateEdge { online: 0, index: 1 }));
    }

    #[test]
    fn bad_arrival_order_rejected() {
        let mut g = BipartiteGraph::new(1, vec![vec![0], vec![0]]);
        g.arrival_order = vec![0, 0];
        assert_eq!(validate_graph(&g), Err(GraphError::BadArrivalOrder { m_online: 2 }));
    }

    #[test]
    fn run_online_no_edges_empty_matching() {
        let g = BipartiteGraph::new(4, vec![vec![], vec![], vec![]]);
        let mut algo = random_greedy();
        let m = run_online(&g, &mut algo, seed(0)).unwrap();
        assert_eq!(matching_size(&m), 0);
    }

    #[test]
    fn run_online_complete_graph_perfect() {
        let adj = vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1, 2]];
        let g = BipartiteGraph::new(3, adj);
        for t in 0..20 {
            let mut algo = random_greedy();
            let m = run_online(&g, &mut algo, seed(t)).unwrap();
            assert_eq!(matching_size(&m), 3);
            assert!(m.is_valid_for(&g));
        }
    }

    #[test]
    fn run_online_fixture_with_perfect_predictor() {
        let (g, sigma) = half_competitive_instance();
        let mut algo = min_predicted_degree(&sigma);
        let m = run_online(&g, &mut algo, seed(3)).unwrap();
        assert_eq!(matching_size(&m), 3);
        assert!(m.is_valid_for(&g));
    }

    #[test]
    fn run_online_is_deterministic() {
        let (g, sigma) = half_competitive_instance();
        let run = |t| {
            let mut algo = min_predicted_degree(&sigma);
            run_online(&g, &mut algo, seed(t)).unwrap()
        };
        assert_eq!(run(5), run(5));
    }

    #[test]
    fn contract_violation_detected() {
        struct Liar;
        impl OnlineAlgorithm for Liar {
            fn choose(&mut self, _v: u32, _c: &[u32], _rng: &mut ChaCha12Rng) -> Option<u32> {
                Some(99)
            }
        }
        let g = BipartiteGraph::new(2, vec![vec![0, 1]]);
        let err = run_online(&g, &mut Liar, seed(0)).unwrap_err();
        assert_eq!(err, GraphError::ContractViolation { online: 0, index: 99 });
    }

    #[test]
    fn l2_error_zero_for_perfect_predictor() {
        let (g, sigma) = half_competitive_instance();
        assert_eq!(predictor_l2_error(&sigma, &g), 0.0);
    }

    #[test]
    fn l2_error_single_term() {
        // one offline node of degree 2, the others isolated
        let g = BipartiteGraph::new(3, vec![vec![1], vec![1]]);
        let sigma = DegreePredictor::new(vec![0.0, 0.0, 0.0]);
        assert_eq!(predictor_l2_error(&sigma, &g), 2.0);
    }

    #[test]
    fn l2_error_matches_direct_recomputation() {
        let g = BipartiteGraph::new(4, vec![vec![0, 1], vec![1, 2], vec![2], vec![0, 3]]);
        let sigma = DegreePredictor::new(vec![1.5, 0.0, 3.0, 2.0]);
        let deg = g.offline_degrees();
        let direct: f64 = sigma
            .sigma
            .iter()
            .zip(&deg)
            .map(|(&s, &d)| (s - d as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        assert_eq!(predictor_l2_error(&sigma, &g), direct);
    }

    #[test]
    fn trial_seed_streams_are_distinct() {
        let a = seed(0).rng(StreamKind::GraphGen).next_u64();
        let b = seed(0).rng(StreamKind::Algorithm).next_u64();
        let c = seed(1).rng(StreamKind::GraphGen).next_u64();
        let a2 = seed(0).rng(StreamKind::GraphGen).next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, a2);
    }

    #[test]
    fn predictor_validation() {
        let g = BipartiteGraph::new(2, vec![vec![0]]);
        assert!(DegreePredictor::new(vec![1.0]).validate(g.n_offline).is_err());
        assert!(DegreePredictor::new(vec![1.0, -0.5]).validate(g.n_offline).is_err());
        assert!(DegreePredictor::new(vec![1.0, 0.0]).validate(g.n_offline).is_ok());
    }
}
