//! C ABI over the matching library.
//!
//! Conventions: every constructor returns a status code and writes its result
//! through an out pointer; handles are opaque and freed by the matching
//! `*_free` function; passing NULL where a handle or out pointer is expected
//! yields `NullArgument`, never a crash. Strings are NUL-terminated UTF-8.
//! Panics are caught at the boundary and reported as `InternalError`.

use std::ffi::CStr;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use mpdmatch::algorithms::algorithm_by_name;
use mpdmatch::analysis::{
    analytic_ratio, asymptotic_hall_bound, asymptotic_mpd_fraction, AnalyticMode,
};
use mpdmatch::generators::{clvb_sample, expcutoff_profile, zipf_profile};
use mpdmatch::graph::{
    matching_size, run_online, validate_graph, BipartiteGraph, DegreePredictor, TrialSeed,
};
use mpdmatch::oracle::{hall_subset, max_matching};

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MpdStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    UnknownAlgorithm = 3,
    InvalidUtf8 = 4,
    InternalError = 5,
}

/// Opaque bipartite instance handle.
pub struct MpdGraph {
    inner: BipartiteGraph,
}

/// Opaque degree predictor handle.
pub struct MpdPredictor {
    inner: DegreePredictor,
}

fn guard<F: FnOnce() -> MpdStatus>(f: F) -> MpdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => MpdStatus::InternalError,
    }
}

/// # Safety
/// `out` must be valid for writes. The written handle must be released with
/// `mpd_graph_free`.
unsafe fn write_graph(out: *mut *mut MpdGraph, g: BipartiteGraph) -> MpdStatus {
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    *out = Box::into_raw(Box::new(MpdGraph { inner: g }));
    MpdStatus::Ok
}

/// Builds a graph from parallel edge endpoint arrays: edge i joins offline
/// node `offline[i]` to online node `online[i]`. Duplicate edges are
/// rejected. On success writes a new handle to `out`.
///
/// # Safety
/// `offline` and `online` must point to `n_edges` readable elements each (or
/// be NULL only when `n_edges` is 0), and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_new(
    n_offline: u32,
    m_online: u32,
    offline: *const u32,
    online: *const u32,
    n_edges: usize,
    out: *mut *mut MpdGraph,
) -> MpdStatus {
    if out.is_null() || (n_edges > 0 && (offline.is_null() || online.is_null())) {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        let offs = if n_edges == 0 { &[][..] } else { std::slice::from_raw_parts(offline, n_edges) };
        let ons = if n_edges == 0 { &[][..] } else { std::slice::from_raw_parts(online, n_edges) };
        let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); m_online as usize];
        for (&u, &v) in offs.iter().zip(ons) {
            if u >= n_offline || v >= m_online {
                return MpdStatus::InvalidArgument;
            }
            adjacency[v as usize].push(u);
        }
        let g = BipartiteGraph::new(n_offline as usize, adjacency);
        if validate_graph(&g).is_err() {
            return MpdStatus::InvalidArgument;
        }
        write_graph(out, g)
    })
}

/// Samples a Chung-Lu bipartite instance with Zipf expected degrees
/// `c * (i + 1)^(-alpha)`, reproducibly from `(master_seed, trial)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_clvb_zipf(
    n: u32,
    m: u32,
    c: f64,
    alpha: f64,
    master_seed: u64,
    trial: u64,
    out: *mut *mut MpdGraph,
) -> MpdStatus {
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        let profile = match zipf_profile(n as usize, c, alpha) {
            Ok(p) => p,
            Err(_) => return MpdStatus::InvalidArgument,
        };
        if profile.validate_for_m(m as usize).is_err() {
            return MpdStatus::InvalidArgument;
        }
        match clvb_sample(&profile, m as usize, TrialSeed::new(master_seed, trial)) {
            Ok(g) => write_graph(out, g),
            Err(_) => MpdStatus::InvalidArgument,
        }
    })
}

/// Releases a graph handle. NULL is a no-op.
///
/// # Safety
/// `g` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_free(g: *mut MpdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of offline nodes, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_n_offline(g: *const MpdGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.inner.n_offline as u32)
}

/// Number of online nodes, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_m_online(g: *const MpdGraph) -> u32 {
    g.as_ref().map_or(0, |g| g.inner.m_online as u32)
}

/// Total edge count, or 0 for NULL.
///
/// # Safety
/// `g` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn mpd_graph_edge_count(g: *const MpdGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Builds the perfect predictor (true offline degrees) for `g`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes. The written
/// handle must be released with `mpd_predictor_free`.
#[no_mangle]
pub unsafe extern "C" fn mpd_predictor_true(
    g: *const MpdGraph,
    out: *mut *mut MpdPredictor,
) -> MpdStatus {
    let Some(g) = g.as_ref() else { return MpdStatus::NullArgument };
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        *out = Box::into_raw(Box::new(MpdPredictor {
            inner: DegreePredictor::perfect(&g.inner),
        }));
        MpdStatus::Ok
    })
}

/// Builds a predictor from `len` nonnegative finite values, one per offline
/// node of the graph it will be used with.
///
/// # Safety
/// `sigma` must point to `len` readable doubles (or be NULL only when `len`
/// is 0); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_predictor_new(
    sigma: *const f64,
    len: usize,
    out: *mut *mut MpdPredictor,
) -> MpdStatus {
    if out.is_null() || (len > 0 && sigma.is_null()) {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        let values = if len == 0 { &[][..] } else { std::slice::from_raw_parts(sigma, len) };
        let predictor = DegreePredictor::new(values.to_vec());
        if predictor.validate(len).is_err() {
            return MpdStatus::InvalidArgument;
        }
        *out = Box::into_raw(Box::new(MpdPredictor { inner: predictor }));
        MpdStatus::Ok
    })
}

/// Releases a predictor handle. NULL is a no-op.
///
/// # Safety
/// `p` must be a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mpd_predictor_free(p: *mut MpdPredictor) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Maximum matching size (Hopcroft-Karp), written to `out`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_max_matching(g: *const MpdGraph, out: *mut usize) -> MpdStatus {
    let Some(g) = g.as_ref() else { return MpdStatus::NullArgument };
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        *out = max_matching(&g.inner);
        MpdStatus::Ok
    })
}

/// Empirical Hall upper bound on the maximum matching, written to `out`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_hall_bound(g: *const MpdGraph, out: *mut usize) -> MpdStatus {
    let Some(g) = g.as_ref() else { return MpdStatus::NullArgument };
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        *out = hall_subset(&g.inner).bound;
        MpdStatus::Ok
    })
}

/// Runs a named online algorithm ("mpd", "mindegree", "ranking", "greedy",
/// or "mpd-augment:<base>") once and writes the matching size to `out_size`.
/// Randomized decisions are keyed by `(master_seed, trial)`.
///
/// # Safety
/// `g` and `predictor` must be live handles, `name` a NUL-terminated string,
/// and `out_size` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_run_algorithm(
    g: *const MpdGraph,
    predictor: *const MpdPredictor,
    name: *const c_char,
    master_seed: u64,
    trial: u64,
    out_size: *mut usize,
) -> MpdStatus {
    let Some(g) = g.as_ref() else { return MpdStatus::NullArgument };
    let Some(predictor) = predictor.as_ref() else { return MpdStatus::NullArgument };
    if name.is_null() || out_size.is_null() {
        return MpdStatus::NullArgument;
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else { return MpdStatus::InvalidUtf8 };
    guard(|| {
        if predictor.inner.validate(g.inner.n_offline).is_err() {
            return MpdStatus::InvalidArgument;
        }
        let mut algo = match algorithm_by_name(name, &g.inner, &predictor.inner) {
            Ok(a) => a,
            Err(_) => return MpdStatus::UnknownAlgorithm,
        };
        match run_online(&g.inner, algo.as_mut(), TrialSeed::new(master_seed, trial)) {
            Ok(matching) => {
                *out_size = matching_size(&matching);
                MpdStatus::Ok
            }
            Err(_) => MpdStatus::InternalError,
        }
    })
}

/// Analytic expected MPD size over the analytic Hall bound for a finite
/// Zipf instance (`n` offline, `m` online, degrees `c * (i + 1)^(-alpha)`),
/// written to `out`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_analytic_ratio_zipf(
    n: u32,
    m: u32,
    c: f64,
    alpha: f64,
    out: *mut f64,
) -> MpdStatus {
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        let profile = match zipf_profile(n as usize, c, alpha) {
            Ok(p) => p,
            Err(_) => return MpdStatus::InvalidArgument,
        };
        match analytic_ratio(&profile, AnalyticMode::Finite { n: n as usize, m: m as usize }) {
            Ok(r) => {
                *out = r;
                MpdStatus::Ok
            }
            Err(_) => MpdStatus::InvalidArgument,
        }
    })
}

/// Asymptotic MPD-to-Hall ratio for the cutoff power-law family, written to
/// `out`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mpd_asymptotic_ratio_expcutoff(
    alpha: f64,
    lambda: f64,
    tail_eps: f64,
    out: *mut f64,
) -> MpdStatus {
    if out.is_null() {
        return MpdStatus::NullArgument;
    }
    guard(|| {
        let profile = match expcutoff_profile(alpha, lambda, tail_eps) {
            Ok(p) => p,
            Err(_) => return MpdStatus::InvalidArgument,
        };
        match (asymptotic_mpd_fraction(&profile), asymptotic_hall_bound(&profile)) {
            (Ok(m), Ok(h)) if h > 0.0 => {
                *out = m / h;
                MpdStatus::Ok
            }
            _ => MpdStatus::InvalidArgument,
        }
    })
}

/// Static description of a status code. Never NULL.
#[no_mangle]
pub extern "C" fn mpd_status_message(status: MpdStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        MpdStatus::Ok => b"ok\0",
        MpdStatus::NullArgument => b"null argument\0",
        MpdStatus::InvalidArgument => b"invalid argument\0",
        MpdStatus::UnknownAlgorithm => b"unknown algorithm\0",
        MpdStatus::InvalidUtf8 => b"invalid utf-8\0",
        MpdStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr().cast()
}
