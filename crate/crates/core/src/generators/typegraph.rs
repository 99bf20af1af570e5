//! Type graphs for the known-i.i.d. arrival model, plus the Molloy-Reed and
//! preferential-attachment families that generate them.

use std::collections::HashSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::generators::{DegreeProfile, GeneratorError};
use crate::graph::{BipartiteGraph, DegreePredictor, StreamKind, TrialSeed};

/// A bipartite type graph together with a sampling distribution over its
/// online type nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypeGraph {
    pub base: BipartiteGraph,
    pub type_distribution: Vec<f64>,
}

impl TypeGraph {
    /// Uniform distribution over the online types.
    pub fn uniform(base: BipartiteGraph) -> Self {
        let m = base.m_online;
        TypeGraph { base, type_distribution: vec![1.0 / m as f64; m] }
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.type_distribution.len() != self.base.m_online {
            return Err(GeneratorError::InvalidParam(format!(
                "type distribution has {} entries for {} online types",
                self.type_distribution.len(),
                self.base.m_online
            )));
        }
        if self.type_distribution.iter().any(|&p| !(p.is_finite() && p >= 0.0)) {
            return Err(GeneratorError::InvalidParam(
                "type distribution entries must be nonnegative".into(),
            ));
        }
        let sum = crate::analysis::numeric::kahan_sum(self.type_distribution.iter().copied());
        if (sum - 1.0).abs() > 1e-12 {
            return Err(GeneratorError::InvalidParam(format!(
                "type distribution sums to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

/// Draws `m_hat` online nodes i.i.d. from the type distribution, each
/// copying its type's adjacency, and predicts offline degrees as the type
/// graph degree rescaled by m_hat / |types|.
pub fn known_iid_sample(
    t: &TypeGraph,
    m_hat: usize,
    seed: TrialSeed,
) -> Result<(BipartiteGraph, DegreePredictor), GeneratorError> {
    t.validate()?;
    if t.base.m_online == 0 {
        return Err(GeneratorError::InvalidParam("type graph has no online types".into()));
    }
    let dist = WeightedIndex::new(&t.type_distribution)
        .map_err(|e| GeneratorError::InvalidParam(format!("type distribution: {e}")))?;
    let mut rng = seed.rng(StreamKind::GraphGen);
    let adjacency: Vec<Vec<u32>> =
        (0..m_hat).map(|_| t.base.adjacency[dist.sample(&mut rng)].clone()).collect();
    let g = BipartiteGraph::new(t.base.n_offline, adjacency);
    let scale = m_hat as f64 / t.base.m_online as f64;
    let sigma = DegreePredictor::new(
        t.base.offline_degrees().iter().map(|&d| d as f64 * scale).collect(),
    );
    Ok((g, sigma))
}

const PAIRING_RETRIES: usize = 50;

/// Bipartite configuration model: both sides draw integer degrees from the
/// grouped profile, stubs are paired uniformly at random, duplicate pairs
/// are re-paired against a random remaining stub up to a retry cap and then
/// dropped, and the longer stub list is trimmed uniformly at random first.
/// The type distribution is uniform.
pub fn molloy_reed_typegraph(
    n_offline: usize,
    m_online: usize,
    profile: &DegreeProfile,
    seed: TrialSeed,
) -> Result<TypeGraph, GeneratorError> {
    if n_offline == 0 || m_online == 0 {
        return Err(GeneratorError::InvalidParam("molloy-reed needs nonempty sides".into()));
    }
    let classes = profile.class_fractions()?;
    if classes.is_empty() {
        return Err(GeneratorError::InvalidParam("molloy-reed needs a nonempty profile".into()));
    }
    for &(delta, _) in &classes {
        if delta.fract() != 0.0 || delta > u32::MAX as f64 {
            return Err(GeneratorError::InvalidParam(format!(
                "molloy-reed needs integer degrees, got {delta}"
            )));
        }
    }
    let dist = WeightedIndex::new(classes.iter().map(|&(_, lam)| lam))
        .map_err(|e| GeneratorError::InvalidParam(format!("degree profile: {e}")))?;
    let mut rng = seed.rng(StreamKind::GraphGen);
    let mut stubs_off: Vec<u32> = Vec::new();
    for i in 0..n_offline as u32 {
        let d = classes[dist.sample(&mut rng)].0 as usize;
        stubs_off.extend(std::iter::repeat_n(i, d));
    }
    let mut stubs_on: Vec<u32> = Vec::new();
    for j in 0..m_online as u32 {
        let d = classes[dist.sample(&mut rng)].0 as usize;
        stubs_on.extend(std::iter::repeat_n(j, d));
    }
    while stubs_off.len() > stubs_on.len() {
        let r = rng.random_range(0..stubs_off.len());
        stubs_off.swap_remove(r);
    }
    while stubs_on.len() > stubs_off.len() {
        let r = rng.random_range(0..stubs_on.len());
        stubs_on.swap_remove(r);
    }
    stubs_on.shuffle(&mut rng);
    let mut edges: HashSet<(u32, u32)> = HashSet::with_capacity(stubs_off.len());
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m_online];
    for idx in 0..stubs_off.len() {
        let u = stubs_off[idx];
        for retry in 0..=PAIRING_RETRIES {
            let v = stubs_on[idx];
            if edges.insert((u, v)) {
                adjacency[v as usize].push(u);
                break;
            }
            if retry == PAIRING_RETRIES || idx + 1 >= stubs_on.len() {
                break;
            }
            let r = rng.random_range(idx + 1..stubs_on.len());
            stubs_on.swap(idx, r);
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    Ok(TypeGraph::uniform(BipartiteGraph::new(n_offline, adjacency)))
}

/// Sequential random edge insertion where each endpoint is chosen with
/// probability proportional to its current degree plus one. Duplicate picks
/// are retried up to a cap, then skipped; the type distribution is uniform.
pub fn pref_attachment_typegraph(
    n_offline: usize,
    m_online: usize,
    n_edges: usize,
    seed: TrialSeed,
) -> Result<TypeGraph, GeneratorError> {
    if n_offline == 0 || m_online == 0 {
        return Err(GeneratorError::InvalidParam(
            "preferential attachment needs nonempty sides".into(),
        ));
    }
    let mut rng = seed.rng(StreamKind::GraphGen);
    // token bags: node i appears deg(i) + 1 times
    let mut bag_off: Vec<u32> = (0..n_offline as u32).collect();
    let mut bag_on: Vec<u32> = (0..m_online as u32).collect();
    let mut edges: HashSet<(u32, u32)> = HashSet::with_capacity(n_edges);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m_online];
    for _ in 0..n_edges {
        let mut placed = None;
        for _ in 0..=PAIRING_RETRIES {
            let u = bag_off[rng.random_range(0..bag_off.len())];
            let v = bag_on[rng.random_range(0..bag_on.len())];
            if edges.insert((u, v)) {
                placed = Some((u, v));
                break;
            }
        }
        if let Some((u, v)) = placed {
            adjacency[v as usize].push(u);
            bag_off.push(u);
            bag_on.push(v);
        }
    }
    for nbrs in &mut adjacency {
        nbrs.sort_unstable();
    }
    Ok(TypeGraph::uniform(BipartiteGraph::new(n_offline, adjacency)))
}
