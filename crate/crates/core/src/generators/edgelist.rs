//! Edge-list ingestion, the bipartite double cover transform, and the
//! first-snapshot degree predictor used on real graph sequences.

use std::collections::HashMap;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::generators::GeneratorError;
use crate::graph::{BipartiteGraph, DegreePredictor};

/// A graph loaded from disk, keeping the original node ids of both sides so
/// predictors can be joined across snapshots of the same network.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: BipartiteGraph,
    pub offline_ids: Vec<u64>,
    pub online_ids: Vec<u64>,
    offline_index: HashMap<u64, u32>,
    online_index: HashMap<u64, u32>,
}

impl LoadedGraph {
    fn from_sides(graph: BipartiteGraph, offline_ids: Vec<u64>, online_ids: Vec<u64>) -> Self {
        let offline_index =
            offline_ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
        let online_index = online_ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
        LoadedGraph { graph, offline_ids, online_ids, offline_index, online_index }
    }

    pub fn offline_index_of(&self, id: u64) -> Option<u32> {
        self.offline_index.get(&id).copied()
    }

    pub fn online_index_of(&self, id: u64) -> Option<u32> {
        self.online_index.get(&id).copied()
    }
}

/// Parses a whitespace-separated "offline_id online_id" edge list.
///
/// Lines starting with `#` are comments, except the two optional directives
/// `# n_offline N` and `# m_online M`: when present, ids are taken as dense
/// indices below those bounds (so isolated nodes survive a round trip);
/// otherwise each side's distinct ids are compacted in sorted order.
/// Duplicate pairs collapse to one edge.
pub fn load_edge_list(path: &Path) -> Result<LoadedGraph, GeneratorError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|source| GeneratorError::Io { path: display.clone(), source })?;
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut n_offline: Option<usize> = None;
    let mut m_online: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut tokens = rest.split_whitespace();
            match (tokens.next(), tokens.next(), tokens.next()) {
                (Some("n_offline"), Some(v), None) => {
                    n_offline = Some(parse_count(&display, line, v)?);
                }
                (Some("m_online"), Some(v), None) => {
                    m_online = Some(parse_count(&display, line, v)?);
                }
                _ => {}
            }
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (u, v) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(GeneratorError::Parse {
                    path: display,
                    line,
                    msg: format!("expected two node ids, got \"{trimmed}\""),
                })
            }
        };
        pairs.push((parse_id(&display, line, u)?, parse_id(&display, line, v)?));
    }

    let (graph, offline_ids, online_ids) = match (n_offline, m_online) {
        (Some(n), Some(m)) => {
            let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m];
            for &(u, v) in &pairs {
                if u >= n as u64 || v >= m as u64 {
                    return Err(GeneratorError::Parse {
                        path: display,
                        line: 0,
                        msg: format!("edge ({u}, {v}) outside declared bounds {n} x {m}"),
                    });
                }
                adjacency[v as usize].push(u as u32);
            }
            dedup_lists(&mut adjacency);
            (
                BipartiteGraph::new(n, adjacency),
                (0..n as u64).collect(),
                (0..m as u64).collect(),
            )
        }
        (None, None) => {
            let mut offline_ids: Vec<u64> = pairs.iter().map(|&(u, _)| u).collect();
            let mut online_ids: Vec<u64> = pairs.iter().map(|&(_, v)| v).collect();
            offline_ids.sort_unstable();
            offline_ids.dedup();
            online_ids.sort_unstable();
            online_ids.dedup();
            let off_idx: HashMap<u64, u32> =
                offline_ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
            let on_idx: HashMap<u64, u32> =
                online_ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
            let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); online_ids.len()];
            for &(u, v) in &pairs {
                adjacency[on_idx[&v] as usize].push(off_idx[&u]);
            }
            dedup_lists(&mut adjacency);
            (BipartiteGraph::new(offline_ids.len(), adjacency), offline_ids, online_ids)
        }
        _ => {
            return Err(GeneratorError::Parse {
                path: display,
                line: 0,
                msg: "n_offline and m_online directives must appear together".into(),
            })
        }
    };
    Ok(LoadedGraph::from_sides(graph, offline_ids, online_ids))
}

fn parse_count(path: &str, line: usize, token: &str) -> Result<usize, GeneratorError> {
    token.parse().map_err(|_| GeneratorError::Parse {
        path: path.to_string(),
        line,
        msg: format!("bad count \"{token}\""),
    })
}

fn parse_id(path: &str, line: usize, token: &str) -> Result<u64, GeneratorError> {
    let signed: i64 = token.parse().map_err(|_| GeneratorError::Parse {
        path: path.to_string(),
        line,
        msg: format!("bad node id \"{token}\""),
    })?;
    if signed < 0 {
        return Err(GeneratorError::Parse {
            path: path.to_string(),
            line,
            msg: format!("negative node id {signed}"),
        });
    }
    Ok(signed as u64)
}

/// Parses a whitespace-separated "a b" undirected edge list over a single
/// node universe (`#` comment lines allowed), as consumed by the
/// double-cover construction. Ids are used directly as node indices; the
/// node count is the largest id plus one.
pub fn load_undirected_edges(path: &Path) -> Result<(Vec<(u32, u32)>, usize), GeneratorError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)
        .map_err(|source| GeneratorError::Io { path: display.clone(), source })?;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut n = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(GeneratorError::Parse {
                    path: display,
                    line,
                    msg: format!("expected two node ids, got \"{trimmed}\""),
                })
            }
        };
        let a = parse_id(&display, line, a)?;
        let b = parse_id(&display, line, b)?;
        if a > u32::MAX as u64 || b > u32::MAX as u64 {
            return Err(GeneratorError::Parse {
                path: display,
                line,
                msg: format!("node id out of range in ({a}, {b})"),
            });
        }
        n = n.max(a as usize + 1).max(b as usize + 1);
        edges.push((a as u32, b as u32));
    }
    Ok((edges, n))
}

fn dedup_lists(adjacency: &mut [Vec<u32>]) {
    for nbrs in adjacency {
        nbrs.sort_unstable();
        nbrs.dedup();
    }
}

/// Writes the graph as an edge list with size directives, so loading it
/// back reproduces the adjacency exactly (isolated nodes included).
pub fn write_edge_list(path: &Path, g: &BipartiteGraph) -> Result<(), GeneratorError> {
    let display = path.display().to_string();
    let io_err = |source| GeneratorError::Io { path: display.clone(), source };
    let mut out = Vec::new();
    writeln!(out, "# n_offline {}", g.n_offline).map_err(io_err)?;
    writeln!(out, "# m_online {}", g.m_online).map_err(io_err)?;
    for (v, nbrs) in g.adjacency.iter().enumerate() {
        for &u in nbrs {
            writeln!(out, "{u} {v}").map_err(io_err)?;
        }
    }
    fs::write(path, out).map_err(io_err)
}

/// Doubles an undirected graph on `n` nodes into an n x n bipartite graph:
/// each edge {i, j} becomes the two edges (u_i, v_j) and (u_j, v_i), and a
/// self-loop {i, i} becomes the single edge (u_i, v_i).
pub fn bipartite_double_cover(
    edges: &[(u32, u32)],
    n: usize,
) -> Result<BipartiteGraph, GeneratorError> {
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a as usize >= n || b as usize >= n {
            return Err(GeneratorError::InvalidParam(format!(
                "edge ({a}, {b}) outside node range 0..{n}"
            )));
        }
        adjacency[b as usize].push(a);
        if a != b {
            adjacency[a as usize].push(b);
        }
    }
    for nbrs in adjacency.iter_mut() {
        nbrs.sort_unstable();
        let before = nbrs.len();
        nbrs.dedup();
        if nbrs.len() != before {
            return Err(GeneratorError::InvalidParam(
                "duplicate undirected edge in double cover input".into(),
            ));
        }
    }
    Ok(BipartiteGraph::new(n, adjacency))
}

/// Predicts each of `target`'s offline degrees from the `first` snapshot by
/// original node id: the degree there if the node appears, else 1.
pub fn first_snapshot_predictor(first: &LoadedGraph, target: &LoadedGraph) -> DegreePredictor {
    let first_degrees = first.graph.offline_degrees();
    let sigma = target
        .offline_ids
        .iter()
        .map(|&id| match first.offline_index_of(id) {
            Some(idx) => first_degrees[idx as usize] as f64,
            None => 1.0,
        })
        .collect();
    DegreePredictor::new(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_graph;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        use std::io::Write;
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn two_edge_file_compacts_to_two_by_two() {
        let f = write_temp("0 0\n1 1\n");
        let loaded = load_edge_list(f.path()).unwrap();
        assert_eq!(loaded.graph.n_offline, 2);
        assert_eq!(loaded.graph.m_online, 2);
        assert_eq!(loaded.graph.edge_count(), 2);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let f = write_temp("# a comment\n\n10 20\n# another\n30 20\n");
        let loaded = load_edge_list(f.path()).unwrap();
        assert_eq!(loaded.graph.n_offline, 2);
        assert_eq!(loaded.graph.m_online, 1);
        assert_eq!(loaded.offline_ids, vec![10, 30]);
        assert_eq!(loaded.online_ids, vec![20]);
        assert_eq!(loaded.offline_index_of(30), Some(1));
        assert_eq!(loaded.online_index_of(99), None);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let f = write_temp("0 1\nnot numbers\n");
        match load_edge_list(f.path()) {
            Err(GeneratorError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn negative_id_rejected() {
        let f = write_temp("0 1\n-3 2\n");
        match load_edge_list(f.path()) {
            Err(GeneratorError::Parse { line, msg, .. }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("negative"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn three_token_line_rejected() {
        let f = write_temp("0 1 2\n");
        assert!(matches!(load_edge_list(f.path()), Err(GeneratorError::Parse { line: 1, .. })));
    }

    #[test]
    fn round_trip_preserves_adjacency_and_isolated_nodes() {
        let g = BipartiteGraph::new(5, vec![vec![0, 3], vec![], vec![0, 4]]);
        let f = tempfile::NamedTempFile::new().unwrap();
        write_edge_list(f.path(), &g).unwrap();
        let loaded = load_edge_list(f.path()).unwrap();
        assert_eq!(loaded.graph, g);
    }

    #[test]
    fn directive_bounds_enforced() {
        let f = write_temp("# n_offline 2\n# m_online 2\n0 5\n");
        assert!(matches!(load_edge_list(f.path()), Err(GeneratorError::Parse { .. })));
    }

    #[test]
    fn single_undirected_edge_doubles() {
        let g = bipartite_double_cover(&[(1, 2)], 4).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.adjacency[1], vec![2]);
        assert_eq!(g.adjacency[2], vec![1]);
        assert!(validate_graph(&g).is_ok());
    }

    #[test]
    fn triangle_doubles_to_six_edges() {
        let g = bipartite_double_cover(&[(0, 1), (1, 2), (0, 2)], 3).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.offline_degrees(), vec![2, 2, 2]);
    }

    #[test]
    fn self_loop_becomes_single_diagonal_edge() {
        let g = bipartite_double_cover(&[(2, 2)], 3).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.adjacency[2], vec![2]);
    }

    #[test]
    fn double_cover_preserves_degree_sequence() {
        use rand::Rng;
        let mut rng = crate::graph::TrialSeed::new(12, 0).rng(crate::graph::StreamKind::GraphGen);
        for _ in 0..20 {
            let n = 12usize;
            let mut edges = Vec::new();
            let mut degree = vec![0u32; n];
            for a in 0..n as u32 {
                for b in (a + 1)..n as u32 {
                    if rng.random::<f64>() < 0.3 {
                        edges.push((a, b));
                        degree[a as usize] += 1;
                        degree[b as usize] += 1;
                    }
                }
            }
            let g = bipartite_double_cover(&edges, n).unwrap();
            assert_eq!(g.offline_degrees(), degree);
            let online_deg: Vec<u32> =
                g.adjacency.iter().map(|nbrs| nbrs.len() as u32).collect();
            assert_eq!(online_deg, degree);
        }
    }

    #[test]
    fn duplicate_undirected_edge_rejected() {
        assert!(bipartite_double_cover(&[(0, 1), (1, 0)], 2).is_err());
    }

    #[test]
    fn snapshot_predictor_joins_by_id() {
        // first snapshot: offline ids {100, 200}, degrees 2 and 1
        let first = write_temp("100 7\n100 8\n200 7\n");
        // later snapshot: offline ids {200, 300}
        let later = write_temp("200 7\n300 8\n300 9\n");
        let first = load_edge_list(first.path()).unwrap();
        let later = load_edge_list(later.path()).unwrap();
        let sigma = first_snapshot_predictor(&first, &later);
        // id 200 had degree 1 in the first snapshot; id 300 is new
        assert_eq!(sigma.sigma, vec![1.0, 1.0]);
        let sigma_self = first_snapshot_predictor(&first, &first);
        assert_eq!(sigma_self.sigma, vec![2.0, 1.0]);
        assert_eq!(crate::graph::predictor_l2_error(&sigma_self, &first.graph), 0.0);
    }

    #[test]
    fn snapshot_predictor_degree_seven() {
        let mut text = String::new();
        for v in 0..7 {
            text.push_str(&format!("42 {v}\n"));
        }
        let first = load_edge_list(write_temp(&text).path()).unwrap();
        let later = load_edge_list(write_temp("42 0\n5 1\n").path()).unwrap();
        let sigma = first_snapshot_predictor(&first, &later);
        // target offline ids sorted: 5 then 42
        assert_eq!(sigma.sigma, vec![1.0, 7.0]);
    }
}
