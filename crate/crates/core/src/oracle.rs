//! Ground-truth machinery: exact maximum matching (Hopcroft-Karp plus a
//! brute-force cross-check) and the empirical Hall-subset upper bound.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::BipartiteGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute force is capped at 12 offline nodes, graph has {0}")]
    TooLarge(usize),
}

const NONE: u32 = u32::MAX;

/// Exact maximum matching size via Hopcroft-Karp.
pub fn max_matching(g: &BipartiteGraph) -> usize {
    let n = g.n_offline;
    let m = g.m_online;
    let mut match_on = vec![NONE; m];
    let mut match_off = vec![NONE; n];
    let mut dist = vec![u32::MAX; m];
    let mut queue = VecDeque::new();
    let mut size = 0;
    loop {
        queue.clear();
        for v in 0..m {
            if match_on[v] == NONE {
                dist[v] = 0;
                queue.push_back(v as u32);
            } else {
                dist[v] = u32::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(v) = queue.pop_front() {
            for &u in &g.adjacency[v as usize] {
                let w = match_off[u as usize];
                if w == NONE {
                    reachable_free = true;
                } else if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            return size;
        }
        for v in 0..m as u32 {
            if match_on[v as usize] == NONE && augment(g, v, &mut match_on, &mut match_off, &mut dist)
            {
                size += 1;
            }
        }
    }
}

fn augment(
    g: &BipartiteGraph,
    v: u32,
    match_on: &mut [u32],
    match_off: &mut [u32],
    dist: &mut [u32],
) -> bool {
    for &u in &g.adjacency[v as usize] {
        let w = match_off[u as usize];
        if w == NONE
            || (dist[w as usize] == dist[v as usize] + 1
                && augment(g, w, match_on, match_off, dist))
        {
            match_on[v as usize] = u;
            match_off[u as usize] = v;
            return true;
        }
    }
    dist[v as usize] = u32::MAX;
    false
}

/// Exhaustive maximum matching over offline subsets. Only for graphs with at
/// most 12 offline nodes; a test oracle, not a production path.
pub fn brute_force_matching(g: &BipartiteGraph) -> Result<usize, OracleError> {
    let n = g.n_offline;
    if n > 12 {
        return Err(OracleError::TooLarge(n));
    }
    let masks = 1usize << n;
    let mut reachable = vec![false; masks];
    reachable[0] = true;
    for nbrs in &g.adjacency {
        let snapshot: Vec<usize> =
            (0..masks).filter(|&mask| reachable[mask]).collect();
        for mask in snapshot {
            for &u in nbrs {
                let bit = 1usize << u;
                if mask & bit == 0 {
                    reachable[mask | bit] = true;
                }
            }
        }
    }
    Ok((0..masks)
        .filter(|&mask| reachable[mask])
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0))
}

/// A Hall-theorem certificate: the offline set `s_star` built from the
/// degree-1 nodes, its online neighborhood, and the implied upper bound
/// `n_offline - (|s_star| - |n_s_star|)` on the maximum matching size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallCertificate {
    pub s_star: Vec<u32>,
    pub n_s_star: Vec<u32>,
    pub bound: usize,
}

/// Builds the certificate around U1, the offline nodes of true degree 1:
/// `s_star` is every offline node whose whole neighborhood lies inside
/// N(U1), degree-0 nodes included.
pub fn hall_subset(g: &BipartiteGraph) -> HallCertificate {
    let deg = g.offline_degrees();
    let mut covered = vec![false; g.m_online];
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        if nbrs.iter().any(|&u| deg[u as usize] == 1) {
            covered[v] = true;
        }
    }
    let mut in_s = vec![true; g.n_offline];
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        if !covered[v] {
            for &u in nbrs {
                in_s[u as usize] = false;
            }
        }
    }
    let mut in_n = vec![false; g.m_online];
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        if nbrs.iter().any(|&u| in_s[u as usize]) {
            in_n[v] = true;
        }
    }
    let s_star: Vec<u32> = (0..g.n_offline as u32).filter(|&u| in_s[u as usize]).collect();
    let n_s_star: Vec<u32> = (0..g.m_online as u32).filter(|&v| in_n[v as usize]).collect();
    // a degree-1 node's unique neighbor injects N(U1) into U1, so the
    // deficiency |s_star| - |n_s_star| is never negative
    let bound = g.n_offline - (s_star.len() - n_s_star.len());
    HallCertificate { s_star, n_s_star, bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::half_competitive_instance;
    use crate::graph::{StreamKind, TrialSeed};
    use rand::seq::SliceRandom;
    use rand::Rng;

    fn random_graph(n: usize, m: usize, p: f64, t: u64) -> BipartiteGraph {
        let mut rng = TrialSeed::new(5150, t).rng(StreamKind::GraphGen);
        let adjacency = (0..m)
            .map(|_| (0..n as u32).filter(|_| rng.random::<f64>() < p).collect())
            .collect();
        BipartiteGraph::new(n, adjacency)
    }

    #[test]
    fn complete_graph_perfect_matching() {
        for k in 1..=6 {
            let adj = vec![(0..k as u32).collect::<Vec<_>>(); k];
            let g = BipartiteGraph::new(k, adj);
            assert_eq!(max_matching(&g), k);
        }
    }

    #[test]
    fn edgeless_graph_zero() {
        let g = BipartiteGraph::new(5, vec![vec![]; 4]);
        assert_eq!(max_matching(&g), 0);
        assert_eq!(brute_force_matching(&g).unwrap(), 0);
    }

    #[test]
    fn single_edge() {
        let g = BipartiteGraph::new(2, vec![vec![1]]);
        assert_eq!(max_matching(&g), 1);
        assert_eq!(brute_force_matching(&g).unwrap(), 1);
    }

    #[test]
    fn fixture_has_perfect_matching() {
        let (g, _) = half_competitive_instance();
        assert_eq!(max_matching(&g), 6);
        assert_eq!(brute_force_matching(&g).unwrap(), 6);
    }

    #[test]
    fn brute_force_rejects_large_graphs() {
        let g = BipartiteGraph::new(13, vec![vec![0]]);
        assert_eq!(brute_force_matching(&g), Err(OracleError::TooLarge(13)));
    }

    #[test]
    fn hopcroft_karp_matches_brute_force_on_random_graphs() {
        for t in 0..200 {
            let g = random_graph(8, 8, 0.3, t);
            assert_eq!(max_matching(&g), brute_force_matching(&g).unwrap(), "graph {t}");
        }
    }

    #[test]
    fn hopcroft_karp_matches_brute_force_on_two_regular_graphs() {
        // union of two random perfect matchings on 6+6 nodes
        for t in 0..100 {
            let mut rng = TrialSeed::new(33, t).rng(StreamKind::GraphGen);
            let mut p1: Vec<u32> = (0..6).collect();
            let mut p2: Vec<u32> = (0..6).collect();
            p1.shuffle(&mut rng);
            p2.shuffle(&mut rng);
            let adjacency = (0..6)
                .map(|v| {
                    let mut nbrs = vec![p1[v]];
                    if p2[v] != p1[v] {
                        nbrs.push(p2[v]);
                    }
                    nbrs
                })
                .collect();
            let g = BipartiteGraph::new(6, adjacency);
            assert_eq!(max_matching(&g), brute_force_matching(&g).unwrap(), "pairing {t}");
        }
    }

    #[test]
    fn hall_forced_example() {
        // one online node adjacent to both offline nodes, each of degree 1
        let g = BipartiteGraph::new(2, vec![vec![0, 1]]);
        let cert = hall_subset(&g);
        assert_eq!(cert.s_star, vec![0, 1]);
        assert_eq!(cert.n_s_star, vec![0]);
        assert_eq!(cert.bound, 1);
        assert_eq!(max_matching(&g), 1);
    }

    #[test]
    fn hall_without_degree_one_nodes() {
        // complete 3x3 plus one isolated offline node
        let adj = vec![vec![0, 1, 2]; 3];
        let g = BipartiteGraph::new(4, adj);
        let cert = hall_subset(&g);
        assert_eq!(cert.s_star, vec![3]);
        assert!(cert.n_s_star.is_empty());
        assert_eq!(cert.bound, 3);
    }

    #[test]
    fn hall_bound_dominates_max_matching() {
        for t in 0..300 {
            let g = random_graph(9, 9, 0.18, t);
            let cert = hall_subset(&g);
            let mx = max_matching(&g);
            assert!(cert.bound >= mx, "graph {t}: bound {} < matching {mx}", cert.bound);
        }
    }

    #[test]
    fn hall_neighborhood_and_maximality() {
        for t in 0..100 {
            let g = random_graph(10, 10, 0.2, t);
            let cert = hall_subset(&g);
            let in_n: Vec<bool> = {
                let mut v = vec![false; g.m_online];
                for &x in &cert.n_s_star {
                    v[x as usize] = true;
                }
                v
            };
            let in_s: Vec<bool> = {
                let mut v = vec![false; g.n_offline];
                for &x in &cert.s_star {
                    v[x as usize] = true;
                }
                v
            };
            // n_s_star is exactly N(s_star)
            for (v, nbrs) in g.adjacency.iter().enumerate() {
                let touches = nbrs.iter().any(|&u| in_s[u as usize]);
                assert_eq!(touches, in_n[v], "graph {t}, online {v}");
            }
            // every member's neighborhood lies inside n_s_star, and every
            // excluded node has a neighbor outside it
            let offline_adj = g.offline_adjacency();
            for u in 0..g.n_offline {
                let inside = offline_adj[u].iter().all(|&v| in_n[v as usize]);
                assert_eq!(inside, in_s[u], "graph {t}, offline {u}");
            }
        }
    }
}
