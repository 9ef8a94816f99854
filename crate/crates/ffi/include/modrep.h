#ifndef MODREP_H
#define MODREP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ModrepStatus {
  MODREP_STATUS_OK = 0,
  MODREP_STATUS_NULL_POINTER = 1,
  MODREP_STATUS_INVALID_UTF8 = 2,
  MODREP_STATUS_INVALID_ARGUMENT = 3,
  MODREP_STATUS_UNSUPPORTED = 4,
  MODREP_STATUS_COMPUTATION = 5,
  MODREP_STATUS_PANIC = 6,
} ModrepStatus;

// Opaque handle to a finite field `F_q` together with its quadratic extension.
typedef struct ModrepTower ModrepTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, a static string.
const char *modrep_version(void);

// Message of the last failed call on this thread, or null after a success.
// Valid until the next `modrep_*` call on this thread.
const char *modrep_last_error_message(void);

// Releases a string returned through an `out` parameter. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void modrep_string_free(char *s);

// Builds `F_q` and `F_{q^2}`. `q` must be a prime power within the field bound.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum ModrepStatus modrep_tower_new(uint64_t q, struct ModrepTower **out);

// # Safety
// `t` must come from `modrep_tower_new` and not have been freed. Null is ignored.
void modrep_tower_free(struct ModrepTower *t);

// Characteristic, degree and size of the base field. Any output may be null.
//
// # Safety
// `t` must be a live handle; non-null outputs must be writable.
enum ModrepStatus modrep_tower_params(const struct ModrepTower *t,
                                      uint32_t *p,
                                      uint32_t *n,
                                      uint32_t *q);

// Table for the tower's field as JSON. `what` is `"dims"` or `"chars"`.
//
// # Safety
// `t` must be a live handle, `what` a NUL-terminated string, `out` writable.
enum ModrepStatus modrep_table_json(const struct ModrepTower *t, const char *what, char **out);

// Matrices of the comparison diagram for weight `k` and scalar `s` as JSON.
// `form` is `"sl2_over_fq"`, `"u2_over_fq2"` or `"gl2_extended"`; null means the first.
//
// # Safety
// `t` must be a live handle, `form` null or NUL-terminated, `out` writable.
enum ModrepStatus modrep_diagram_json(const struct ModrepTower *t,
                                      int64_t k,
                                      int64_t s,
                                      const char *form,
                                      char **out);

// Runs verification suites over `qs[0..len]` and writes the report.
//
// `suites` is a comma-separated list (null means all), `format` is `"json"`,
// `"tsv"` or `"text"` (null means json). `failures`, when non-null, receives
// the number of failed checks.
//
// # Safety
// `qs` must point to `len` values; strings must be null or NUL-terminated;
// `out` must be writable.
enum ModrepStatus modrep_verify(const uint64_t *qs,
                                uintptr_t len,
                                const char *suites,
                                uint64_t seed,
                                const char *format,
                                char **out,
                                uintptr_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODREP_H */
