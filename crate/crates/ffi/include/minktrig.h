#ifndef MINKTRIG_H
#define MINKTRIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum MtStatus {
  MT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MT_STATUS_NULL = 1,
  /**
   * The norm description or a string argument was rejected.
   */
  MT_STATUS_CONFIG = 2,
  /**
   * An argument lies outside the operation's domain.
   */
  MT_STATUS_DOMAIN = 3,
  /**
   * An iterative routine failed to converge.
   */
  MT_STATUS_NUMERICAL = 4,
  /**
   * The operation needs a Radon plane.
   */
  MT_STATUS_UNSUPPORTED = 5,
  /**
   * A panic was caught at the boundary.
   */
  MT_STATUS_PANIC = 6,
} MtStatus;

typedef enum MtRadonFlag {
  MT_RADON_FLAG_RADON = 0,
  MT_RADON_FLAG_NOT_RADON = 1,
  MT_RADON_FLAG_UNKNOWN = 2,
} MtRadonFlag;

/**
 * Opaque plane handle.
 */
typedef struct MtContext MtContext;

typedef struct MtVec2 {
  double x;
  double y;
} MtVec2;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a plane from a builtin name such as `"builtin:lp:4"`.
 * `table_size` 0 selects the default circle table size.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MtStatus mt_context_new_builtin(const char *spec, size_t table_size, struct MtContext **out);

/**
 * Builds a plane from a JSON norm description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum MtStatus mt_context_new_json(const char *json, size_t table_size, struct MtContext **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `ctx` must come from one of the constructors and not be used afterwards.
 */
void mt_context_free(struct MtContext *ctx);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_radon_flag(const struct MtContext *ctx, enum MtRadonFlag *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_norm(const struct MtContext *ctx, struct MtVec2 v, double *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_antinorm(const struct MtContext *ctx, struct MtVec2 v, double *out);

/**
 * Birkhoff map: the direction `x` is Birkhoff orthogonal to, scaled to
 * antinorm one and lying to the left of `x`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_b(const struct MtContext *ctx, struct MtVec2 x, struct MtVec2 *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_cm(const struct MtContext *ctx, struct MtVec2 x, struct MtVec2 y, double *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_sn(const struct MtContext *ctx, struct MtVec2 x, struct MtVec2 y, double *out);

/**
 * Only defined in Radon planes; otherwise `MT_STATUS_UNSUPPORTED`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_cn(const struct MtContext *ctx, struct MtVec2 x, struct MtVec2 y, double *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_ca(const struct MtContext *ctx, struct MtVec2 x, struct MtVec2 y, double *out);

/**
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_gateaux(const struct MtContext *ctx,
                         struct MtVec2 x,
                         struct MtVec2 y,
                         double *out);

/**
 * Distortion of the tangent pair from an exterior point `p`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_gamma_from_point(const struct MtContext *ctx, struct MtVec2 p, double *out);

/**
 * Distortion of the tangents at two independent directions `x`, `y`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` writable.
 */
enum MtStatus mt_gamma_pair(const struct MtContext *ctx,
                            struct MtVec2 x,
                            struct MtVec2 y,
                            double *out);

/**
 * Message for the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *mt_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *mt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MINKTRIG_H */
