//! The bipartite Chung-Lu-Vu model and the noisy subsample predictor.

use rand::Rng;

use crate::generators::{DegreeProfile, GeneratorError};
use crate::graph::{BipartiteGraph, DegreePredictor, StreamKind, TrialSeed};

/// Samples a bipartite graph on `profile.len()` offline and `m` online
/// nodes where edge (i, j) appears independently with probability d_i/m.
///
/// Uses geometric skip sampling per offline node, so the cost is linear in
/// the number of edges rather than in n*m.
pub fn clvb_sample(
    profile: &DegreeProfile,
    m: usize,
    seed: TrialSeed,
) -> Result<BipartiteGraph, GeneratorError> {
    let d = profile.per_node("clvb_sample")?;
    profile.validate_for_m(m)?;
    let mut rng = seed.rng(StreamKind::GraphGen);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m];
    for (i, &di) in d.iter().enumerate() {
        let p = di / m as f64;
        if p <= 0.0 {
            continue;
        }
        if p >= 1.0 {
            for nbrs in adjacency.iter_mut() {
                nbrs.push(i as u32);
            }
            continue;
        }
        let ln_skip = (-p).ln_1p();
        let mut j = 0usize;
        while j < m {
            let u: f64 = rng.random();
            let skip = ((-u).ln_1p() / ln_skip).floor();
            if skip >= (m - j) as f64 {
                break;
            }
            j += skip as usize;
            adjacency[j].push(i as u32);
            j += 1;
        }
    }
    Ok(BipartiteGraph::new(d.len(), adjacency))
}

/// Predicts degrees from a uniformly sampled ceil(fraction * m)-subset of
/// the online nodes, rescaled by 1/fraction so values estimate full degrees.
pub fn subsample_predictor(
    g: &BipartiteGraph,
    fraction: f64,
    seed: TrialSeed,
) -> Result<DegreePredictor, GeneratorError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(GeneratorError::InvalidParam(format!(
            "subsample fraction must be in (0, 1], got {fraction}"
        )));
    }
    let mut rng = seed.rng(StreamKind::Predictor);
    let k = ((fraction * g.m_online as f64).ceil() as usize).min(g.m_online);
    let mut chosen = vec![false; g.m_online];
    for idx in rand::seq::index::sample(&mut rng, g.m_online, k) {
        chosen[idx] = true;
    }
    let mut counts = vec![0u32; g.n_offline];
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        if chosen[v] {
            for &u in nbrs {
                counts[u as usize] += 1;
            }
        }
    }
    Ok(DegreePredictor::new(counts.iter().map(|&c| c as f64 / fraction).collect()))
}
