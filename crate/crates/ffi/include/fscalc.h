#ifndef FSCALC_H
#define FSCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FscBase {
  FSC_BASE_BOUNDED_DOMAIN = 0,
  FSC_BASE_FULL_SPACE = 1,
} FscBase;

typedef enum FscScale {
  FSC_SCALE_B = 0,
  FSC_SCALE_F = 1,
} FscScale;

typedef enum FscStatus {
  FSC_STATUS_OK = 0,
  FSC_STATUS_NULL_POINTER = 1,
  FSC_STATUS_INVALID_UTF8 = 2,
  FSC_STATUS_PARSE = 3,
  FSC_STATUS_CONTRACT = 4,
  FSC_STATUS_DIMENSION_MISMATCH = 5,
  FSC_STATUS_NOT_IN_DOMAIN = 6,
  FSC_STATUS_INTERNAL = 7,
} FscStatus;

/**
 * A validated bootstrap plan.
 */
typedef struct FscCertificate FscCertificate;

/**
 * A boundary operator class.
 */
typedef struct FscOperator FscOperator;

/**
 * A function space `B^s_{p,q}` or `F^s_{p,q}`.
 */
typedef struct FscSpace FscSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the library.
 */
const char *fsc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fsc_string_free(char *s);

/**
 * Builds a space from textual parameters: `s` like `"3/2"` or `"6-eps"`,
 * `p` and `q` positive rationals or `"inf"`.
 *
 * # Safety
 * String arguments must be null or NUL-terminated; `out` must be writable.
 */
enum FscStatus fsc_space_new(enum FscScale scale,
                             const char *s,
                             const char *p,
                             const char *q,
                             uint32_t n,
                             enum FscBase base,
                             struct FscSpace **out);

/**
 * JSON form of a space.
 *
 * # Safety
 * `space` must be a live handle; `out_json` must be writable.
 */
enum FscStatus fsc_space_json(const struct FscSpace *space, char **out_json);

/**
 * # Safety
 * `space` must be null or a handle from [`fsc_space_new`] not yet freed.
 */
void fsc_space_free(struct FscSpace *space);

/**
 * Operator of trace class `r` (1 or 2) with trace order `r - 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FscStatus fsc_operator_new(uint8_t trace_class, struct FscOperator **out);

/**
 * # Safety
 * `op` must be null or a handle from [`fsc_operator_new`] not yet freed.
 */
void fsc_operator_free(struct FscOperator *op);

/**
 * Domain membership. `out_report_json` may be null.
 *
 * # Safety
 * Handles must be live; `out_in_domain` must be writable.
 */
enum FscStatus fsc_membership(const struct FscSpace *space,
                              const struct FscOperator *op,
                              bool *out_in_domain,
                              char **out_report_json);

/**
 * Composition smoothness of the space as JSON `{"base":[num,den],"eps":k}`.
 * `proved` selects the proved guarantee, otherwise the conjectured value.
 *
 * # Safety
 * `space` must be live; `out_json` must be writable.
 */
enum FscStatus fsc_sigma(const struct FscSpace *space, bool proved, char **out_json);

/**
 * Whether `src ↪ dst` is derivable. The proof JSON is written only when it is.
 *
 * # Safety
 * Handles must be live; `out_holds` must be writable; `out_proof_json` may be null.
 */
enum FscStatus fsc_embeds(const struct FscSpace *src,
                          const struct FscSpace *dst,
                          bool *out_holds,
                          char **out_proof_json);

/**
 * Plans a bootstrap from `initial` to `target`. The certificate is replayed
 * before it is returned.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum FscStatus fsc_plan(const struct FscSpace *initial,
                        const struct FscSpace *target,
                        const struct FscOperator *op,
                        struct FscCertificate **out);

/**
 * Number of moves in the certificate; 0 for a null handle.
 *
 * # Safety
 * `cert` must be null or live.
 */
size_t fsc_certificate_move_count(const struct FscCertificate *cert);

/**
 * # Safety
 * `cert` must be live; `out_json` must be writable.
 */
enum FscStatus fsc_certificate_json(const struct FscCertificate *cert, char **out_json);

/**
 * Replays a certificate given as JSON, e.g. one produced elsewhere.
 *
 * # Safety
 * `json` must be NUL-terminated; `op` live; `out_valid` writable.
 */
enum FscStatus fsc_certificate_validate_json(const char *json,
                                             const struct FscOperator *op,
                                             bool *out_valid);

/**
 * # Safety
 * `cert` must be null or a handle from [`fsc_plan`] not yet freed.
 */
void fsc_certificate_free(struct FscCertificate *cert);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSCALC_H */
