#ifndef MPDMATCH_H
#define MPDMATCH_H

/* Generated by cbindgen from mpdmatch-ffi; regenerate with cargo build. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum {
  MPD_STATUS_OK = 0,
  MPD_STATUS_NULL_ARGUMENT = 1,
  MPD_STATUS_INVALID_ARGUMENT = 2,
  MPD_STATUS_UNKNOWN_ALGORITHM = 3,
  MPD_STATUS_INVALID_UTF8 = 4,
  MPD_STATUS_INTERNAL_ERROR = 5,
} MpdStatus;

// Opaque bipartite instance handle.
typedef struct MpdGraph MpdGraph;

// Opaque degree predictor handle.
typedef struct MpdPredictor MpdPredictor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a graph from parallel edge endpoint arrays: edge i joins offline
// node `offline[i]` to online node `online[i]`. Duplicate edges are
// rejected. On success writes a new handle to `out`.
//
// # Safety
// `offline` and `online` must point to `n_edges` readable elements each (or
// be NULL only when `n_edges` is 0), and `out` must be valid for writes.
MpdStatus mpd_graph_new(uint32_t n_offline,
                        uint32_t m_online,
                        const uint32_t *offline,
                        const uint32_t *online,
                        size_t n_edges,
                        MpdGraph **out);

// Samples a Chung-Lu bipartite instance with Zipf expected degrees
// `c * (i + 1)^(-alpha)`, reproducibly from `(master_seed, trial)`.
//
// # Safety
// `out` must be valid for writes.
MpdStatus mpd_graph_clvb_zipf(uint32_t n,
                              uint32_t m,
                              double c,
                              double alpha,
                              uint64_t master_seed,
                              uint64_t trial,
                              MpdGraph **out);

// Releases a graph handle. NULL is a no-op.
//
// # Safety
// `g` must be a handle from this library, not yet freed.
void mpd_graph_free(MpdGraph *g);

// Number of offline nodes, or 0 for NULL.
//
// # Safety
// `g` must be a live handle or NULL.
uint32_t mpd_graph_n_offline(const MpdGraph *g);

// Number of online nodes, or 0 for NULL.
//
// # Safety
// `g` must be a live handle or NULL.
uint32_t mpd_graph_m_online(const MpdGraph *g);

// Total edge count, or 0 for NULL.
//
// # Safety
// `g` must be a live handle or NULL.
size_t mpd_graph_edge_count(const MpdGraph *g);

// Builds the perfect predictor (true offline degrees) for `g`.
//
// # Safety
// `g` must be a live handle; `out` must be valid for writes. The written
// handle must be released with `mpd_predictor_free`.
MpdStatus mpd_predictor_true(const MpdGraph *g, MpdPredictor **out);

// Builds a predictor from `len` nonnegative finite values, one per offline
// node of the graph it will be used with.
//
// # Safety
// `sigma` must point to `len` readable doubles (or be NULL only when `len`
// is 0); `out` must be valid for writes.
MpdStatus mpd_predictor_new(const double *sigma, size_t len, MpdPredictor **out);

// Releases a predictor handle. NULL is a no-op.
//
// # Safety
// `p` must be a handle from this library, not yet freed.
void mpd_predictor_free(MpdPredictor *p);

// Maximum matching size (Hopcroft-Karp), written to `out`.
//
// # Safety
// `g` must be a live handle; `out` must be valid for writes.
MpdStatus mpd_max_matching(const MpdGraph *g, size_t *out);

// Empirical Hall upper bound on the maximum matching, written to `out`.
//
// # Safety
// `g` must be a live handle; `out` must be valid for writes.
MpdStatus mpd_hall_bound(const MpdGraph *g, size_t *out);

// Runs a named online algorithm ("mpd", "mindegree", "ranking", "greedy",
// or "mpd-augment:<base>") once and writes the matching size to `out_size`.
// Randomized decisions are keyed by `(master_seed, trial)`.
//
// # Safety
// `g` and `predictor` must be live handles, `name` a NUL-terminated string,
// and `out_size` valid for writes.
MpdStatus mpd_run_algorithm(const MpdGraph *g,
                            const MpdPredictor *predictor,
                            const char *name,
                            uint64_t master_seed,
                            uint64_t trial,
                            size_t *out_size);

// Analytic expected MPD size over the analytic Hall bound for a finite
// Zipf instance (`n` offline, `m` online, degrees `c * (i + 1)^(-alpha)`),
// written to `out`.
//
// # Safety
// `out` must be valid for writes.
MpdStatus mpd_analytic_ratio_zipf(uint32_t n, uint32_t m, double c, double alpha, double *out);

// Asymptotic MPD-to-Hall ratio for the cutoff power-law family, written to
// `out`.
//
// # Safety
// `out` must be valid for writes.
MpdStatus mpd_asymptotic_ratio_expcutoff(double alpha, double lambda, double tail_eps, double *out);

// Static description of a status code. Never NULL.
const char *mpd_status_message(MpdStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MPDMATCH_H */
