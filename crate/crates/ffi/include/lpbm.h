#ifndef LPBM_H
#define LPBM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Outcome of a call.
 */
enum LpbmStatus {
  LPBM_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  LPBM_STATUS_NULL_POINTER = 1,
  /*
   Bad input: parameters, body descriptions, sizes.
   */
  LPBM_STATUS_INVALID_ARGUMENT = 2,
  /*
   A numerical procedure failed (solver, linear program, eigenproblem).
   */
  LPBM_STATUS_NUMERICAL = 3,
  /*
   A file could not be read.
   */
  LPBM_STATUS_IO = 4,
  /*
   The output buffer is too small.
   */
  LPBM_STATUS_BUFFER_TOO_SMALL = 5,
  /*
   Internal panic; the library state is unchanged.
   */
  LPBM_STATUS_INTERNAL = 6,
};

/*
 Opaque convex body.
 */
struct LpbmBody;

/*
 Opaque quadrature grid on the sphere.
 */
struct LpbmGrid;

/*
 Both sides of the L_p inequality for `V_j`.
 */
struct LpbmVerdict {
  /*
   `V_j` of the combination.
   */
  double lhs;
  double rhs_geometric;
  double rhs_p;
  /*
   Relative margin of the logarithmic inequality, positive on a violation.
   */
  double margin_geometric;
  /*
   Relative margin of the L_p inequality, positive on a violation.
   */
  double margin_p;
};

/*
 Summary of a Newton solve.
 */
struct LpbmSolveSummary {
  bool converged;
  size_t iterations;
  double residual;
  double min_h;
  double max_h;
};

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *lpbm_version(void);

/*
 Copy the last error message of this thread into `buf`.

 # Safety
 `buf` must point to `len` writable bytes or be null; `needed` may be null.
 */
enum LpbmStatus lpbm_last_error(char *buf, size_t len, size_t *needed);

/*
 Parse a body from its JSON description.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LpbmStatus lpbm_body_from_json(const char *json, struct LpbmBody **out_body);

/*
 Load a body from a JSON file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum LpbmStatus lpbm_body_load(const char *path, struct LpbmBody **out_body);

/*
 Ball of `radius` in R^n, n in {2, 3}.

 # Safety
 `out` must be writable.
 */
enum LpbmStatus lpbm_body_ball(size_t n, double radius, struct LpbmBody **out_body);

/*
 Axis-aligned ellipsoid with `n` semi-axes.

 # Safety
 `axes` must point to `n` values; `out` must be writable.
 */
enum LpbmStatus lpbm_body_ellipsoid(const double *axes, size_t n, struct LpbmBody **out_body);

/*
 Cube `[-a, a]^3`.

 # Safety
 `out` must be writable.
 */
enum LpbmStatus lpbm_body_cube(double a, struct LpbmBody **out_body);

/*
 Release a body. Null is ignored.

 # Safety
 `body` must come from this library and not be used afterwards.
 */
void lpbm_body_free(struct LpbmBody *body);

/*
 Ambient dimension of a body.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_body_dimension(const struct LpbmBody *body, size_t *out_n);

/*
 Support function at a vector of length equal to the body dimension.

 # Safety
 `x` must point to `len` values; pointers must be valid.
 */
enum LpbmStatus lpbm_body_support(const struct LpbmBody *body,
                                  const double *x,
                                  size_t len,
                                  double *out_value);

/*
 JSON description of a body, copied into `buf` like [`lpbm_last_error`].

 # Safety
 `buf` must point to `len` writable bytes or be null; `needed` may be null.
 */
enum LpbmStatus lpbm_body_to_json(const struct LpbmBody *body,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

/*
 L_p combination `(1 - lambda) K +_p lambda L`.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_body_combine(const struct LpbmBody *k,
                                  const struct LpbmBody *l,
                                  double p,
                                  double lambda,
                                  struct LpbmBody **out_body);

/*
 Product quadrature grid on S^{n-1}.

 # Safety
 `out` must be writable.
 */
enum LpbmStatus lpbm_grid_new(size_t n, size_t resolution, struct LpbmGrid **out_grid);

/*
 Release a grid. Null is ignored.

 # Safety
 `grid` must come from this library and not be used afterwards.
 */
void lpbm_grid_free(struct LpbmGrid *grid);

/*
 Number of grid nodes.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_grid_len(const struct LpbmGrid *grid, size_t *out_len);

/*
 Intrinsic volume `V_j` by the default method for the body, with the
 surface-integral grid at `resolution`. `out_error` may be null.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_intrinsic_volume(const struct LpbmBody *body,
                                      size_t j,
                                      size_t resolution,
                                      double *out_value,
                                      double *out_error);

/*
 Evaluate the L_p inequality for `V_j` on the pair `(K, L)`.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_check_inequality(const struct LpbmBody *k,
                                      const struct LpbmBody *l,
                                      double p,
                                      double lambda,
                                      size_t j,
                                      struct LpbmVerdict *out_verdict);

/*
 Smallest eigenvalue of the second-variation operator (n = 3, j = 2) on
 even mean-zero fields, with harmonics up to `max_degree`.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_spectral_gap(const struct LpbmBody *body,
                                  const struct LpbmGrid *grid,
                                  size_t max_degree,
                                  double *out_value);

/*
 Largest relative gap between parallel-body volumes and the Steiner
 polynomial over the radii `rhos`.

 # Safety
 `rhos` must point to `count` values; pointers must be valid.
 */
enum LpbmStatus lpbm_steiner_gap(const struct LpbmBody *body,
                                 const struct LpbmGrid *grid,
                                 const double *rhos,
                                 size_t count,
                                 double *out_gap);

/*
 Solve `h^(1-p) s_order(h) = 1 + eps Y` on S^2, where only `order = 1`
 is supported and `Y` is the orthonormal zonal harmonic of degree 2. A failed solve returns `Numerical` and still fills
 `out_summary` with the last iterate.

 # Safety
 Pointers must be valid.
 */
enum LpbmStatus lpbm_solve_quadrupole(size_t order,
                                      double p,
                                      double eps,
                                      bool allow_excluded_regime,
                                      struct LpbmSolveSummary *out_summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPBM_H */
