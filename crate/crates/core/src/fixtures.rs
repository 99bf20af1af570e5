//! Hand-built instances used in tests and the self-test command.

use crate::graph::{BipartiteGraph, DegreePredictor};

/// The 6x6 hard instance on which a degree-guided greedy with perfect
/// predictions matches exactly half of the maximum.
///
/// Offline nodes u1..u4 look attractive to the first three arrivals, but
/// u4, u5, u6 each have a single later suitor. Predicted degrees steer the
/// first arrivals away from the scarce nodes' partners, and the three
/// singleton arrivals find their only neighbor taken half the time in the
/// adversarial order used here. The maximum matching is perfect (size 6);
/// the policy gets 3.
pub fn half_competitive_instance() -> (BipartiteGraph, DegreePredictor) {
    let adjacency = vec![
        vec![0, 1, 2, 3],
        vec![0, 1, 2, 4],
        vec![0, 1, 2, 5],
        vec![3],
        vec![4],
        vec![5],
    ];
    let g = BipartiteGraph::new(6, adjacency);
    let sigma = DegreePredictor::perfect(&g);
    (g, sigma)
}
