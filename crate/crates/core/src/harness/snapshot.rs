//! Snapshot pipeline: predict degrees of later graph snapshots from the
//! first one, run the online algorithms under that stale predictor, and
//! report mean ratios next to the predictor's l2 error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::algorithm_by_name;
use crate::analysis::numeric::kahan_sum;
use crate::generators::{first_snapshot_predictor, load_edge_list};
use crate::graph::{matching_size, predictor_l2_error, run_online, StreamKind, TrialSeed};
use crate::oracle::max_matching;

use super::config::SnapshotConfig;
use super::HarnessError;

/// Algorithms the snapshot pipeline always runs, in report order.
pub const SNAPSHOT_ALGORITHMS: [&str; 3] = ["mpd", "mindegree", "ranking"];

/// Aggregate result for one later snapshot file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub path: String,
    pub l2_error: f64,
    pub max_matching: usize,
    pub mpd_ratio: f64,
    pub mindegree_ratio: f64,
    pub ranking_ratio: f64,
}

pub fn snapshot_experiment(cfg: &SnapshotConfig) -> Result<Vec<SnapshotRow>, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::Config("trials must be at least 1".to_string()));
    }
    let first = load_edge_list(&cfg.first)?;
    let mut rows = Vec::with_capacity(cfg.later.len());
    for path in &cfg.later {
        let target = load_edge_list(path)?;
        let sigma = first_snapshot_predictor(&first, &target);
        sigma.validate(target.graph.n_offline)?;
        let l2_error = predictor_l2_error(&sigma, &target.graph);
        let mx = max_matching(&target.graph);

        let per_trial: Result<Vec<[usize; 3]>, HarnessError> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|trial| {
                let seed = TrialSeed::new(cfg.master_seed, trial);
                let mut g = target.graph.clone();
                let mut rng = seed.rng(StreamKind::ArrivalShuffle);
                g.shuffle_arrivals(&mut rng);
                let mut sizes = [0usize; 3];
                for (slot, name) in sizes.iter_mut().zip(SNAPSHOT_ALGORITHMS) {
                    let mut algo = algorithm_by_name(name, &g, &sigma)?;
                    *slot = matching_size(&run_online(&g, algo.as_mut(), seed)?);
                }
                Ok(sizes)
            })
            .collect();
        let per_trial = per_trial?;

        let mean_ratio = |idx: usize| -> f64 {
            if mx == 0 {
                return 1.0;
            }
            kahan_sum(per_trial.iter().map(|s| s[idx] as f64 / mx as f64))
                / per_trial.len() as f64
        };
        rows.push(SnapshotRow {
            path: path.display().to_string(),
            l2_error,
            max_matching: mx,
            mpd_ratio: mean_ratio(0),
            mindegree_ratio: mean_ratio(1),
            ranking_ratio: mean_ratio(2),
        });
    }
    Ok(rows)
}
