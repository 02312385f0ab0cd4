/* C interface for the dgldpc spectral-shape library. */

#ifndef DGLDPC_H
#define DGLDPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Success.
#define DGLDPC_OK 0

// A pointer argument was null or an enum argument was out of range.
#define DGLDPC_ERR_ARGUMENT 1

// The JSON description was malformed or inconsistent.
#define DGLDPC_ERR_SCHEMA 2

// The solver failed on well-formed input.
#define DGLDPC_ERR_SOLVER 3

// The requested weight lies outside the solvable domain.
#define DGLDPC_ERR_DOMAIN 4

// Codeword weight spectrum.
#define DGLDPC_KIND_WEIGHT 0

// Stopping sets under bounded-distance check decoding.
#define DGLDPC_KIND_SS_BD 1

// Stopping sets under MAP check decoding.
#define DGLDPC_KIND_SS_MAP 2

// Opaque ensemble handle.
typedef struct DgldpcEnsemble DgldpcEnsemble;

// One solved point of the saddle-point system.
typedef struct DgldpcPoint {
  double alpha;
  // Growth rate in nats per variable node.
  double g;
  double x0;
  double y0;
  double z0;
  double beta;
  double residual;
} DgldpcPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message recorded by the most recent failing call on this thread.
//
// # Safety
//
// The returned pointer is borrowed: it stays valid only until the next
// failing `dgldpc_` call on the same thread, and must not be freed.
const char *dgldpc_last_error_message(void);

// Parses a JSON ensemble description and builds the enumerator of `kind`
// (one of the `DGLDPC_KIND_` constants), storing a new handle in `out`.
//
// # Safety
//
// `json` must point to a NUL-terminated UTF-8 string and `out` must be
// valid for one pointer write. On success `*out` owns the handle and must
// be released with [`dgldpc_ensemble_free`]; on failure `*out` is null.
int dgldpc_ensemble_new(const char *json,
                        int kind,
                        struct DgldpcEnsemble **out);

// Releases a handle created by [`dgldpc_ensemble_new`]. Null is a no-op.
//
// # Safety
//
// `handle` must be null or a pointer returned by [`dgldpc_ensemble_new`]
// that has not already been freed.
void dgldpc_ensemble_free(struct DgldpcEnsemble *handle);

// Writes the design rate of the ensemble.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_design_rate(const struct DgldpcEnsemble *handle,
                       double *out);

// Writes the ratio of codeword length to variable node count.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_block_length_ratio(const struct DgldpcEnsemble *handle,
                              double *out);

// Writes the open upper end of the solvable weight domain.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_alpha_max(const struct DgldpcEnsemble *handle,
                     double *out);

// Writes the maximum normalized edge weight the check side supports.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_max_edge_weight(const struct DgldpcEnsemble *handle,
                           double *out);

// Solves the saddle-point system at one normalized weight and writes the
// full solution.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one [`DgldpcPoint`] write.
int dgldpc_solve_point(const struct DgldpcEnsemble *handle,
                       double alpha,
                       struct DgldpcPoint *out);

// Writes the growth rate `G(alpha)` in nats per variable node.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_growth_rate(const struct DgldpcEnsemble *handle,
                       double alpha,
                       double *out);

// Writes the critical exponent ratio: the infimum positive weight with
// nonnegative growth, or 0 when the spectrum grows from zero weight.
//
// # Safety
//
// `handle` must be a live handle from [`dgldpc_ensemble_new`] and `out`
// must be valid for one double write.
int dgldpc_alpha_star(const struct DgldpcEnsemble *handle,
                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DGLDPC_H */
