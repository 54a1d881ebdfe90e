#ifndef CYCLESPEC_H
#define CYCLESPEC_H

/* Generated by cbindgen from cyclespec-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Success.
#define CYCLESPEC_OK 0

// A parameter violates a domain condition (excluded shift, bad modulus...).
#define CYCLESPEC_ERR_DOMAIN 1

// Evaluation point too close to a resolvent pole.
#define CYCLESPEC_ERR_POLE 2

// Parameters too close to an excluded set even after precision escalation.
#define CYCLESPEC_ERR_NEAR_SINGULAR 3

// The character is not primitive.
#define CYCLESPEC_ERR_NOT_PRIMITIVE 4

// Null pointer, unparsable string, or otherwise invalid argument.
#define CYCLESPEC_ERR_INVALID 5

// Unexpected internal failure (caught panic).
#define CYCLESPEC_ERR_INTERNAL 6

// Standard L_{X_m}(n, χ) over csc^{2n}.
#define CYCLESPEC_L_STANDARD 0

// Odd-character replacement L̃ over csc^{2n}·cot.
#define CYCLESPEC_L_TILDE 1

// Double-argument secant variant L̂ (m not divisible by 4).
#define CYCLESPEC_L_HAT 2

// Opaque evaluation context: working precision plus the last error text.
typedef struct CyclespecCtx CyclespecCtx;

// A complex value demoted to double precision at the ABI boundary.
typedef struct CyclespecComplex {
  double re;
  double im;
} CyclespecComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create an evaluation context. `precision_bits` of 0 selects the default
// (128); values below 53 are rejected with a null return.
struct CyclespecCtx *cyclespec_ctx_new(uint32_t precision_bits);

// Release a context created by [`cyclespec_ctx_new`]. Null is a no-op.
//
// # Safety
// `ctx` must be null or a pointer returned by `cyclespec_ctx_new` that has
// not already been freed.
void cyclespec_ctx_free(struct CyclespecCtx *ctx);

// Message for the most recent failure on this context, or null after a
// success. The pointer stays valid until the next call on the same context.
//
// # Safety
// `ctx` must be a live pointer from `cyclespec_ctx_new`.
const char *cyclespec_last_error(const struct CyclespecCtx *ctx);

// Working precision of the context, in bits.
//
// # Safety
// `ctx` must be a live pointer from `cyclespec_ctx_new`.
uint32_t cyclespec_ctx_precision_bits(const struct CyclespecCtx *ctx);

// Evaluate one twisted trigonometric sum.
//
// `kind` names the family ("cosecant", "secant-double", ...); the shift is
// the exact rational `shift_num/shift_den`; `direct` selects the literal
// summation oracle (nonzero) or the closed/recurrence path (zero).
//
// # Safety
// `ctx` must be a live context pointer; `kind` a NUL-terminated string;
// `out` a writable pointer.
int cyclespec_sum(struct CyclespecCtx *ctx,
                  const char *kind,
                  uint32_t m,
                  int64_t r,
                  int64_t shift_num,
                  uint64_t shift_den,
                  uint32_t n,
                  int direct,
                  struct CyclespecComplex *out);

// First `count` coefficients C_{m,r}(β, n) for n = 1..count by the
// recurrence path, written into `out` (capacity `count`).
//
// # Safety
// `ctx` live; `out` writable for `count` elements.
int cyclespec_cosecant_coefficients(struct CyclespecCtx *ctx,
                                    uint32_t m,
                                    int64_t r,
                                    int64_t beta_num,
                                    uint64_t beta_den,
                                    uint32_t count,
                                    struct CyclespecComplex *out);

// Twisted heat kernel value; `spectral` nonzero selects the spectral
// expansion, zero the Bessel image sum.
//
// # Safety
// `ctx` live; `out` writable.
int cyclespec_heat_kernel(struct CyclespecCtx *ctx,
                          uint32_t m,
                          int64_t beta_num,
                          uint64_t beta_den,
                          int64_t x,
                          int64_t y,
                          double t,
                          int spectral,
                          struct CyclespecComplex *out);

// Twisted resolvent kernel in the cancelled (generating-function)
// normalization, by the Chebyshev closed form.
//
// # Safety
// `ctx` live; `out` writable.
int cyclespec_resolvent(struct CyclespecCtx *ctx,
                        uint32_t m,
                        int64_t beta_num,
                        uint64_t beta_den,
                        int64_t r,
                        double s_re,
                        double s_im,
                        struct CyclespecComplex *out);

// Resolvent pole locations, ascending. Writes at most `capacity` doubles
// and stores the total count in `written`.
//
// # Safety
// `ctx` live; `out` writable for `capacity` doubles; `written` writable.
int cyclespec_resolvent_poles(struct CyclespecCtx *ctx,
                              uint32_t m,
                              int64_t beta_num,
                              uint64_t beta_den,
                              double *out,
                              size_t capacity,
                              size_t *written);

// Number of Dirichlet characters mod m (Euler φ(m)).
//
// # Safety
// `ctx` live; `out` writable.
int cyclespec_character_count(struct CyclespecCtx *ctx, uint32_t m, uint32_t *out);

// Gauss sum τ(χ) for the character at `char_index` in the canonical
// enumeration.
//
// # Safety
// `ctx` live; `out` writable.
int cyclespec_gauss_sum(struct CyclespecCtx *ctx,
                        uint32_t m,
                        uint32_t char_index,
                        struct CyclespecComplex *out);

// Spectral L-function value L_{X_m}(n, χ) (or the L̃/L̂ variants) by the
// direct route; `variant` is one of the CYCLESPEC_L_* constants.
//
// # Safety
// `ctx` live; `out` writable.
int cyclespec_lvalue(struct CyclespecCtx *ctx,
                     uint32_t m,
                     uint32_t char_index,
                     uint32_t n,
                     int variant,
                     struct CyclespecComplex *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CYCLESPEC_H */
