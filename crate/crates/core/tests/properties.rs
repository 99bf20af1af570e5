//! Randomized invariants over the matching stack: oracle agreement, policy
//! guarantees, seeding discipline, serialization fidelity, and the shape of
//! the analytic solution.

use proptest::prelude::*;

use mpdmatch::algorithms::algorithm_by_name;
use mpdmatch::analysis::closed_form::closed_form_solution;
use mpdmatch::generators::{
    clvb_sample, load_edge_list, subsample_predictor, write_edge_list, zipf_profile,
    DegreeProfile,
};
use mpdmatch::graph::{
    matching_size, predictor_l2_error, run_online, BipartiteGraph, DegreePredictor, StreamKind,
    TrialSeed,
};
use mpdmatch::oracle::{brute_force_matching, hall_subset, max_matching};

const POLICIES: [&str; 6] =
    ["mpd", "mindegree", "ranking", "greedy", "mpd-augment:ranking", "mpd-augment:greedy"];

/// Bipartite graphs with 1..=10 offline and 0..=10 online nodes, arbitrary
/// edge sets.
fn graphs() -> impl Strategy<Value = BipartiteGraph> {
    (1..=10usize).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::btree_set(0..n as u32, 0..=n), 0..=10)
            .prop_map(move |adjacency| {
                BipartiteGraph::new(
                    n,
                    adjacency.into_iter().map(|s| s.into_iter().collect()).collect(),
                )
            })
    })
}

/// A graph plus an arbitrary nonnegative prediction per offline node. Zero
/// and repeated values are deliberately common so tie handling gets hit.
fn graphs_with_predictions() -> impl Strategy<Value = (BipartiteGraph, DegreePredictor)> {
    graphs().prop_flat_map(|g| {
        let n = g.n_offline;
        (
            Just(g),
            prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0, 2.0, 7.5, 19.0]), n)
                .prop_map(DegreePredictor::new),
        )
    })
}

proptest! {
    #[test]
    fn oracles_agree(g in graphs()) {
        prop_assert_eq!(max_matching(&g), brute_force_matching(&g).unwrap());
    }

    #[test]
    fn hall_bound_sandwiches_the_optimum(g in graphs()) {
        let bound = hall_subset(&g).bound;
        prop_assert!(max_matching(&g) <= bound);
        prop_assert!(bound <= g.n_offline);
    }

    #[test]
    fn every_policy_is_valid_maximal_and_half_competitive(
        (g, sigma) in graphs_with_predictions(),
        seed in 0u64..1000,
    ) {
        let optimum = max_matching(&g);
        for name in POLICIES {
            let mut algo = algorithm_by_name(name, &g, &sigma).unwrap();
            let matched = run_online(&g, algo.as_mut(), TrialSeed::new(seed, 0)).unwrap();
            prop_assert!(matched.is_valid_for(&g), "{name} returned an invalid matching");
            let taken: Vec<bool> = {
                let mut t = vec![false; g.m_online];
                for &(_, v) in &matched.pairs { t[v as usize] = true; }
                t
            };
            let mut offline_taken = vec![false; g.n_offline];
            for &(u, _) in &matched.pairs { offline_taken[u as usize] = true; }
            for (v, nbrs) in g.adjacency.iter().enumerate() {
                let extendable = !taken[v]
                    && nbrs.iter().any(|&u| !offline_taken[u as usize]);
                prop_assert!(!extendable, "{name} left edge at online node {v} unmatched");
            }
            prop_assert!(
                2 * matching_size(&matched) >= optimum,
                "{name} matched {} of optimum {optimum}",
                matching_size(&matched)
            );
        }
    }

    #[test]
    fn runs_are_reproducible_per_seed(
        (g, sigma) in graphs_with_predictions(),
        seed in 0u64..1000,
    ) {
        for name in POLICIES {
            let run = || {
                let mut algo = algorithm_by_name(name, &g, &sigma).unwrap();
                run_online(&g, algo.as_mut(), TrialSeed::new(seed, 3)).unwrap()
            };
            prop_assert_eq!(run().pairs, run().pairs, "{} depends on hidden state", name);
        }
    }

    #[test]
    fn stream_derivation_is_stable(master in any::<u64>(), trial in any::<u64>()) {
        use rand::RngCore;
        let seed = TrialSeed::new(master, trial);
        let mut a = seed.rng(StreamKind::GraphGen);
        let mut b = seed.rng(StreamKind::GraphGen);
        let first: Vec<u64> = (0..4).map(|_| a.next_u64()).collect();
        let again: Vec<u64> = (0..4).map(|_| b.next_u64()).collect();
        prop_assert_eq!(&first, &again);
        let mut c = seed.rng(StreamKind::Algorithm);
        prop_assert_ne!((0..4).map(|_| c.next_u64()).collect::<Vec<_>>(), again);
    }

    #[test]
    fn full_subsample_is_the_perfect_predictor(
        g in graphs(),
        master in any::<u64>(),
    ) {
        let sigma = subsample_predictor(&g, 1.0, TrialSeed::new(master, 0)).unwrap();
        prop_assert_eq!(predictor_l2_error(&sigma, &g), 0.0);
    }

    #[test]
    fn shortest_float_formatting_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let text = format!("{x}");
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn closed_form_z_rises_monotonically_to_zero(
        degrees in prop::collection::btree_set(1u32..=9, 1..=3),
        n in 10usize..=100,
        m in 100usize..=300,
    ) {
        let k = degrees.len() as f64;
        let classes: Vec<(f64, f64)> =
            degrees.iter().map(|&d| (d as f64, 1.0 / k)).collect();
        let sol = closed_form_solution(&DegreeProfile::Grouped(classes), n, m).unwrap();
        let mut prev = sol.z_all(0.0);
        for step in 1..=8 {
            let t = m as f64 * step as f64 / 8.0;
            let cur = sol.z_all(t);
            for (p, c) in prev.iter().zip(&cur) {
                prop_assert!(c + 1e-12 >= *p, "z fell from {p} to {c} at t = {t}");
                prop_assert!(*c <= 1e-12, "z overshot zero: {c}");
            }
            prev = cur;
        }
        let matched = sol.expected_matched();
        prop_assert!(matched >= -1e-9);
        prop_assert!(matched <= n.min(m) as f64 + 1e-9);
    }

    #[test]
    fn zipf_profiles_start_at_c_and_decay(
        n in 1usize..=300,
        c in 0.5f64..40.0,
        alpha in 0.0f64..3.0,
    ) {
        let profile = zipf_profile(n, c, alpha).unwrap();
        let d = profile.per_node("test").unwrap();
        prop_assert_eq!(d.len(), n);
        prop_assert_eq!(d[0], c);
        for w in d.windows(2) {
            prop_assert!(w[1] <= w[0] && w[1] > 0.0);
        }
    }

    #[test]
    fn edge_lists_round_trip_through_disk(
        profile_c in 2.0f64..12.0,
        seed in any::<u64>(),
    ) {
        let profile = zipf_profile(20, profile_c, 0.7).unwrap();
        let g = clvb_sample(&profile, 25, TrialSeed::new(seed, 0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        write_edge_list(&path, &g).unwrap();
        let loaded = load_edge_list(&path).unwrap();
        prop_assert_eq!(loaded.graph.n_offline, g.n_offline);
        prop_assert_eq!(loaded.graph.m_online, g.m_online);
        prop_assert_eq!(loaded.graph.adjacency, g.adjacency);
    }
}
