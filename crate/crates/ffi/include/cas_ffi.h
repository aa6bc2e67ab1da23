#ifndef CAS_FFI_H
#define CAS_FFI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Values are stable.
 */
typedef enum CasStatus {
  CAS_STATUS_OK = 0,
  CAS_STATUS_NULL_POINTER = 1,
  CAS_STATUS_INVALID_INPUT = 2,
  CAS_STATUS_DEGENERATE_PLANE = 3,
  CAS_STATUS_CLOSURE_FAILURE = 4,
  CAS_STATUS_ANGLE_DEGENERATE = 5,
  CAS_STATUS_BAD_SPEC_PARAMETERS = 6,
  CAS_STATUS_POTENTIALS_INCONSISTENT = 7,
  CAS_STATUS_WRONG_ANGLE_CLASS = 8,
  CAS_STATUS_NON_MONOTONE_CURVE = 9,
  CAS_STATUS_IO = 10,
  CAS_STATUS_OTHER = 11,
  CAS_STATUS_PANIC = 12,
} CasStatus;

/**
 * Immersion grid with optional metric, frames and mask.
 */
typedef struct CasGrid CasGrid;

/**
 * Sampled metric `(mu, nu)` with its angle.
 */
typedef struct CasMetric CasMetric;

/**
 * Oriented spacelike plane.
 */
typedef struct CasPlane CasPlane;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *cas_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cas_version(void);

/**
 * Plane spanned by `u`, `v` (4 doubles each), oriented by their order.
 *
 * # Safety
 * `u` and `v` must point to 4 doubles; `out_plane` must be writable.
 */
enum CasStatus cas_plane_new(const double *u, const double *v, struct CasPlane **out_plane);

/**
 * # Safety
 * `plane` must come from [`cas_plane_new`] or be null.
 */
void cas_plane_free(struct CasPlane *plane);

/**
 * Normalized complex angle `psi1 + i psi2` between `p` and `q`.
 *
 * # Safety
 * Handles must be valid; out pointers writable.
 */
enum CasStatus cas_complex_angle(const struct CasPlane *p,
                                 const struct CasPlane *q,
                                 double *psi1,
                                 double *psi2);

/**
 * `c1 = -2 Re cot psi`, `c2 = 2 Im cot psi`.
 *
 * # Safety
 * Out pointers must be writable.
 */
enum CasStatus cas_angle_constants(double psi1, double psi2, double *c1, double *c2);

/**
 * Solves the Goursat problem on an `nx` by `ny` grid with origin `(x0, y0)` and steps `hx`, `hy`.
 * `mu_bottom` holds `nx` values along `y = y0`, `nu_left` holds `ny` values along `x = x0`.
 *
 * # Safety
 * Arrays must hold the stated number of doubles; `out_metric` must be writable.
 */
enum CasStatus cas_metric_goursat(double psi1,
                                  double psi2,
                                  const double *mu_bottom,
                                  size_t nx,
                                  const double *nu_left,
                                  size_t ny,
                                  double x0,
                                  double y0,
                                  double hx,
                                  double hy,
                                  struct CasMetric **out_metric);

/**
 * # Safety
 * `metric` must come from this library or be null.
 */
void cas_metric_free(struct CasMetric *metric);

/**
 * Integrates the immersion with node (0, 0) sent to `base` (4 doubles).
 * `closure_residual` may be null.
 *
 * # Safety
 * `metric` must be valid; `base` must hold 4 doubles; `out_grid` must be writable.
 */
enum CasStatus cas_integrate(const struct CasMetric *metric,
                             const double *base,
                             struct CasGrid **out_grid,
                             double *closure_residual);

/**
 * Samples a family such as `"lightcone:a=0.5,b=0.3"` on `[xa, xb] x [ya, yb]` with step `h`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out_grid` must be writable.
 */
enum CasStatus cas_family_new(const char *spec,
                              double xa,
                              double xb,
                              double ya,
                              double yb,
                              double h,
                              struct CasGrid **out_grid);

/**
 * # Safety
 * `grid` must come from this library or be null.
 */
void cas_grid_free(struct CasGrid *grid);

/**
 * # Safety
 * `grid` must be valid; out pointers writable.
 */
enum CasStatus cas_grid_dims(const struct CasGrid *grid, size_t *nx, size_t *ny);

/**
 * Copies the points, row-major with 4 doubles per node, into `buf` of `len` doubles.
 *
 * # Safety
 * `buf` must hold `len` doubles.
 */
enum CasStatus cas_grid_points(const struct CasGrid *grid, double *buf, size_t len);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out_grid` must be writable.
 */
enum CasStatus cas_grid_read(const char *path, struct CasGrid **out_grid);

/**
 * # Safety
 * `grid` must be valid; `path` a NUL-terminated string.
 */
enum CasStatus cas_grid_write(const struct CasGrid *grid, const char *path);

/**
 * Constant-angle check against the E1-plane. `pass` receives 1 or 0.
 *
 * # Safety
 * `grid` must be valid; out pointers writable.
 */
enum CasStatus cas_check_constant_angle(const struct CasGrid *grid,
                                        double tol,
                                        double *max_deviation,
                                        int *pass);

/**
 * Runs every applicable verify check against the E1-plane. A non-positive `tol`
 * keeps the per-check defaults. `failed` receives the number of failing checks
 * and `total` (may be null) the number run.
 *
 * # Safety
 * `grid` must be valid; `failed` writable.
 */
enum CasStatus cas_verify(const struct CasGrid *grid, double tol, size_t *failed, size_t *total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAS_FFI_H */
