/* C ABI for the backaction library. Generated by cbindgen; do not edit. */

#ifndef BACKACTION_H
#define BACKACTION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every FFI entry point.
typedef enum BaStatus {
  BA_OK = 0,
  BA_ERR_NULL_ARGUMENT = 1,
  BA_ERR_UTF8 = 2,
  BA_ERR_PARSE = 3,
  BA_ERR_VALIDATION = 4,
  BA_ERR_DIMENSION = 5,
  BA_ERR_PRECONDITION = 6,
  BA_ERR_NO_ZEZD = 7,
  BA_ERR_UNSUPPORTED = 8,
  BA_ERR_DEGENERATE = 9,
  BA_ERR_RESOURCE_LIMIT = 10,
  BA_ERR_BUFFER_TOO_SMALL = 11,
  BA_ERR_PANIC = 12,
} BaStatus;

// Opaque parsed scenario.
typedef struct BaScenario BaScenario;

// Parses a NUL-terminated JSON problem document into a scenario handle.
//
// # Safety
// `json` must point to a valid NUL-terminated string and `out` to a
// writable handle slot.
enum BaStatus ba_scenario_from_json(const char *json, struct BaScenario **out);

// Releases a scenario handle. A null handle is a no-op.
//
// # Safety
// `handle` must have come from `ba_scenario_from_json` and not be freed twice.
void ba_scenario_free(struct BaScenario *handle);

// Hilbert-space dimension of the scenario; 0 for a null handle.
//
// # Safety
// `handle` must be valid or null.
size_t ba_scenario_dimension(const struct BaScenario *handle);

// Lower bound on error + disturbance for two explicit distributions of
// length `d`. `zezd_possible` is 1 when the bound is zero because the first
// distribution majorizes the second.
//
// # Safety
// `p` and `q` must point to `d` doubles; `bound_out` and
// `zezd_possible_out` must be writable.
enum BaStatus ba_tradeoff_bound(const double *p,
                                const double *q,
                                size_t d,
                                double *bound_out,
                                int32_t *zezd_possible_out);

// Doubled Jensen–Shannon divergence of two length-`d` distributions, nats.
//
// # Safety
// `p1`, `p2` must point to `d` doubles; `out` must be writable.
enum BaStatus ba_js_divergence(const double *p1, const double *p2, size_t d, double *out);

// Relative entropy D(p‖r) in nats; +infinity on support violations.
//
// # Safety
// `p`, `r` must point to `d` doubles; `out` must be writable.
enum BaStatus ba_relative_entropy(const double *p, const double *r, size_t d, double *out);

// Full analysis (distributions, verdict, bound) of a scenario as canonical
// JSON. Writes at most `cap` bytes including the trailing NUL; on
// `BA_ERR_BUFFER_TOO_SMALL` the required capacity is stored in `written`.
//
// # Safety
// `handle` must be valid; `buf` must have space for `cap` bytes; `written`
// must be writable.
enum BaStatus ba_analyze_json(const struct BaScenario *handle,
                              char *buf,
                              size_t cap,
                              size_t *written);

// Zero-error zero-disturbance measurement basis for a pure scenario in the
// majorization regime. `signs` selects the branch (d−1 bytes, 0 or 1; null
// means all zeros). The basis is written as d×d complex entries in row-major
// order, interleaved re/im (2·d·d doubles); row i is the vector for outcome
// label i.
//
// # Safety
// `handle` must be valid; `signs` must be null or point to `signs_len`
// bytes; `basis_out` must have room for `2·d·d` doubles.
enum BaStatus ba_zezd_basis(const struct BaScenario *handle,
                            const uint8_t *signs,
                            size_t signs_len,
                            double *basis_out);

// Error + disturbance (nats) of a caller-supplied measurement basis on the
// scenario, with native outcome labels. The basis uses the same layout as
// `ba_zezd_basis` writes.
//
// # Safety
// `handle` must be valid; `basis` must point to `2·d·d` doubles; the out
// pointers must be writable.
enum BaStatus ba_err_dis(const struct BaScenario *handle,
                         const double *basis,
                         double *err_out,
                         double *dis_out);

// Numerical oracle minimum of error + disturbance over candidate bases.
//
// # Safety
// `handle` must be valid; `min_out` must be writable.
enum BaStatus ba_oracle_min(const struct BaScenario *handle,
                            uint64_t budget,
                            uint64_t seed,
                            double *min_out);

// Static description of a status code.
const char *ba_status_message(enum BaStatus status);

#endif /* BACKACTION_H */
