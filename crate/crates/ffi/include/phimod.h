#ifndef PHIMOD_H
#define PHIMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PhimodStatus {
  PHIMOD_STATUS_OK = 0,
  PHIMOD_STATUS_NULL_POINTER = 1,
  PHIMOD_STATUS_INVALID_UTF8 = 2,
  PHIMOD_STATUS_INVALID_JSON = 3,
  PHIMOD_STATUS_INVALID_INPUT = 4,
  PHIMOD_STATUS_PRECISION_EXHAUSTED = 5,
  PHIMOD_STATUS_NOT_ETALE = 6,
  PHIMOD_STATUS_FIELD_ERROR = 7,
  PHIMOD_STATUS_CONDITIONS_FAIL = 8,
  PHIMOD_STATUS_BOUND_VIOLATED = 9,
  PHIMOD_STATUS_SEARCH_EXCEEDED = 10,
  PHIMOD_STATUS_OVERFLOW = 11,
  PHIMOD_STATUS_DENOMINATOR_NOT_PRIME_TO_B = 12,
  PHIMOD_STATUS_INTERNAL = 13,
  PHIMOD_STATUS_PANIC = 14,
} PhimodStatus;

// Opaque etale phi-module.
typedef struct PhimodModule PhimodModule;

// Opaque classification report.
typedef struct PhimodReport PhimodReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *phimod_last_error_message(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void phimod_string_free(char *s);

// Parse a module from interchange JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum PhimodStatus phimod_module_from_json(const char *json, struct PhimodModule **out);

// `D(d, n, a)` over `F_{p^m}` with `sigma = Frob^s` and twist `b`; `a` is given
// by `a_len` coefficients over `F_p`, constant term first.
//
// # Safety
// `a` must point to `a_len` readable integers and `out` must be valid.
enum PhimodStatus phimod_make_standard(uint32_t p,
                                       uint32_t m,
                                       uint32_t s,
                                       uint64_t b,
                                       size_t d,
                                       int64_t n,
                                       const uint32_t *a,
                                       size_t a_len,
                                       struct PhimodModule **out);

// # Safety
// `m` must be NULL or a handle from this library, not used afterwards.
void phimod_module_free(struct PhimodModule *m);

// Dimension of the module; 0 for NULL.
//
// # Safety
// `m` must be NULL or a live handle.
size_t phimod_module_dim(const struct PhimodModule *m);

// Valuation of `det G`; -1 for NULL.
//
// # Safety
// `m` must be NULL or a live handle.
int64_t phimod_module_gamma(const struct PhimodModule *m);

// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum PhimodStatus phimod_module_to_json(const struct PhimodModule *m, char **out);

// Jordan-Holder constituents at working precision `precision` (at least 8).
//
// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum PhimodStatus phimod_classify(const struct PhimodModule *m,
                                  int64_t precision,
                                  struct PhimodReport **out);

// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum PhimodStatus phimod_is_simple(const struct PhimodModule *m, int64_t precision, bool *out);

// # Safety
// `r` must be NULL or a handle from this library, not used afterwards.
void phimod_report_free(struct PhimodReport *r);

// Number of distinct constituents; 0 for NULL.
//
// # Safety
// `r` must be NULL or a live handle.
size_t phimod_report_constituent_count(const struct PhimodReport *r);

// Sum of multiplicity times length over the constituents; 0 for NULL.
//
// # Safety
// `r` must be NULL or a live handle.
uint64_t phimod_report_total_dim(const struct PhimodReport *r);

// # Safety
// `r` must be a live handle and `out` a valid pointer.
enum PhimodStatus phimod_report_to_json(const struct PhimodReport *r, char **out);

// Canonical class of `num/den` in `R_b` as JSON.
//
// # Safety
// `out` must be a valid pointer.
enum PhimodStatus phimod_rb_reduce(int64_t num, int64_t den, uint64_t b, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHIMOD_H */
