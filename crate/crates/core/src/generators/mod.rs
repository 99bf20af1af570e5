//! Random graph models, degree profiles, predictors, and graph transforms.

mod clvb;
mod edgelist;
mod profile;
mod typegraph;

pub use clvb::{clvb_sample, subsample_predictor};
pub use edgelist::{
    bipartite_double_cover, first_snapshot_predictor, load_edge_list, load_undirected_edges,
    write_edge_list, LoadedGraph,
};
pub use profile::{expcutoff_profile, zipf_profile, DegreeProfile, ProfileError};
pub use typegraph::{known_iid_sample, molloy_reed_typegraph, pref_attachment_typegraph, TypeGraph};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("{0}")]
    InvalidParam(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
}
