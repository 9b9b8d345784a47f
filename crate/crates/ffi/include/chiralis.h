#ifndef CHIRALIS_H
#define CHIRALIS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChiralisStatus {
  CHIRALIS_STATUS_OK = 0,
  CHIRALIS_STATUS_NULL_ARGUMENT = 1,
  CHIRALIS_STATUS_INVALID_UTF8 = 2,
  // bad input: unknown Lie algebra, expression syntax, unknown name
  CHIRALIS_STATUS_INVALID_INPUT = 3,
  // mixed grades or parities
  CHIRALIS_STATUS_GRADE_ERROR = 4,
  // a theorem hypothesis does not hold for the given data
  CHIRALIS_STATUS_HYPOTHESIS_FAILED = 5,
  // the requested graded piece is infinite
  CHIRALIS_STATUS_INFINITE_PIECE = 6,
  CHIRALIS_STATUS_INTERNAL = 7,
} ChiralisStatus;

// W(g) together with its basic subcomplex.
typedef struct ChiralisWeil ChiralisWeil;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *chiralis_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void chiralis_string_free(char *s);

// Builds W(g) for a builtin name (t1, sl2, ...) or a JSON file path.
//
// # Safety
// `lie` must be a NUL-terminated string and `out` a valid pointer.
enum ChiralisStatus chiralis_weil_new(const char *lie, struct ChiralisWeil **out);

// # Safety
// `h` must be NULL or a handle from [`chiralis_weil_new`], not yet freed.
void chiralis_weil_free(struct ChiralisWeil *h);

// Number of generators of the underlying free-field algebra.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum ChiralisStatus chiralis_weil_generator_count(const struct ChiralisWeil *h, uintptr_t *out);

// Evaluates an expression in W(g) and returns the normally ordered state.
//
// # Safety
// `h` must be a live handle, `expr` a NUL-terminated string and `out` a
// valid pointer. The result must be released with [`chiralis_string_free`].
enum ChiralisStatus chiralis_weil_eval(const struct ChiralisWeil *h, const char *expr, char **out);

// dim H of the basic subcomplex of W(g) at (degree, weight).
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum ChiralisStatus chiralis_weil_basic_dim_h(const struct ChiralisWeil *h,
                                              int32_t degree,
                                              int32_t weight,
                                              uintptr_t *out);

// Checks the linear representation theorem for `rep` of `lie`. `gamma_bc`
// selects the bc system for the auxiliary fields instead of βγ. Writes 1
// to `passed` when every check holds.
//
// # Safety
// `lie` and `rep` must be NUL-terminated strings and `passed` a valid pointer.
enum ChiralisStatus chiralis_verify_linear_rep(const char *lie,
                                               const char *rep,
                                               bool gamma_bc,
                                               int32_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHIRALIS_H */
