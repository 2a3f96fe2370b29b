#ifndef SUPERBOLIC_H
#define SUPERBOLIC_H

/* Generated by cbindgen from the superbolic-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SbBinaryOp {
  SbBinaryOp_Add = 0,
  SbBinaryOp_Sub = 1,
  SbBinaryOp_Mul = 2,
} SbBinaryOp;

/**
 * Status codes returned by every fallible function.
 */
typedef enum SbStatus {
  SbStatus_Ok = 0,
  /**
   * Invalid argument (null pointer, bad UTF-8, bad JSON, parse error).
   */
  SbStatus_InvalidArgument = 1,
  /**
   * A domain precondition failed (zero body, branch point, wrong conic).
   */
  SbStatus_DomainError = 2,
  /**
   * The requested operation is unavailable for this scalar backend.
   */
  SbStatus_Unsupported = 3,
  /**
   * Geometry verdict errors (not parallel, no perpendicular, ambiguous).
   */
  SbStatus_GeometryError = 4,
  /**
   * Internal invariant violation.
   */
  SbStatus_InternalError = 5,
} SbStatus;

/**
 * Opaque supergeodesic handle.
 */
typedef struct SbGeodesic SbGeodesic;

/**
 * Opaque supernumber handle (f64 coefficients).
 */
typedef struct SbSupernumber SbSupernumber;

/**
 * Opaque super Minkowski point handle.
 */
typedef struct SbVector SbVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message into `buf` (NUL-terminated, truncating);
 * returns the full message length in bytes.
 */
size_t sb_last_error_message(char *buf, size_t len);

/**
 * Release a string returned by this library.
 */
void sb_string_free(char *s);

/**
 * Parse a supernumber from the text form (e.g. `2.5 + 1*e[1,2]`) or from
 * the canonical JSON.
 */
enum SbStatus sb_supernumber_parse(uint8_t gens, const char *text, struct SbSupernumber **out);

void sb_supernumber_free(struct SbSupernumber *v);

enum SbStatus sb_supernumber_clone(const struct SbSupernumber *v, struct SbSupernumber **out);

/**
 * Canonical text form.
 */
enum SbStatus sb_supernumber_to_text(const struct SbSupernumber *v, char **out);

/**
 * Canonical JSON form.
 */
enum SbStatus sb_supernumber_to_json(const struct SbSupernumber *v, char **out);

/**
 * Body (unit-monomial coefficient).
 */
enum SbStatus sb_supernumber_body(const struct SbSupernumber *v, double *out);

enum SbStatus sb_supernumber_binop(enum SbBinaryOp op,
                                   const struct SbSupernumber *a,
                                   const struct SbSupernumber *b,
                                   struct SbSupernumber **out);

/**
 * Geometric-series inverse; fails when the body is zero.
 */
enum SbStatus sb_supernumber_invert(const struct SbSupernumber *v, struct SbSupernumber **out);

/**
 * Analytic lift by tag name (`sqrt`, `exp`, `ln`, `cosh`, `sinh`, `tanh`,
 * `cos`, `sin`, `arccosh`, `arcsinh`, `arctanh`, `arccos`).
 */
enum SbStatus sb_supernumber_apply(const struct SbSupernumber *v,
                                   const char *tag,
                                   struct SbSupernumber **out);

/**
 * Parse a point from `{"x1":...,"x2":...,"y":...,"phi":...,"psi":...}`.
 */
enum SbStatus sb_vector_from_json(uint8_t gens, const char *json, struct SbVector **out);

void sb_vector_free(struct SbVector *v);

enum SbStatus sb_vector_to_json(const struct SbVector *v, char **out);

/**
 * Super Minkowski pairing of two points, as a supernumber handle.
 */
enum SbStatus sb_inner(const struct SbVector *p,
                       const struct SbVector *q,
                       struct SbSupernumber **out);

/**
 * Conic classification as JSON `{"tag":...,"residual":...}`.
 */
enum SbStatus sb_classify(const struct SbVector *p, double tol, char **out);

/**
 * Parse a geodesic from `{"u":...,"v":...}` or
 * `{"e":...,"f":...,"normalize":bool}`.
 */
enum SbStatus sb_geodesic_from_json(uint8_t gens,
                                    const char *json,
                                    double tol,
                                    struct SbGeodesic **out);

void sb_geodesic_free(struct SbGeodesic *l);

enum SbStatus sb_geodesic_to_json(const struct SbGeodesic *l, char **out);

/**
 * The unique geodesic through two points, origin at the first.
 */
enum SbStatus sb_through(const struct SbVector *p,
                         const struct SbVector *q,
                         double tol,
                         struct SbGeodesic **out);

/**
 * Distance data `{"cosh_d":...,"d":...}`; `d` is null at the branch point.
 */
enum SbStatus sb_distance(const struct SbVector *p,
                          const struct SbVector *q,
                          double tol,
                          char **out);

/**
 * Orthogonal projection onto a geodesic:
 * `{"foot":...,"perp":...,"dist":...,"tanh_param":...}`.
 */
enum SbStatus sb_foot(const struct SbVector *p,
                      const struct SbGeodesic *line,
                      double tol,
                      char **out);

/**
 * Triangle report JSON for three vertices.
 */
enum SbStatus sb_triangle_report(const struct SbVector *a,
                                 const struct SbVector *b,
                                 const struct SbVector *c,
                                 double tol,
                                 char **out);

/**
 * Intersection verdict JSON for a geodesic pair.
 */
enum SbStatus sb_intersect(const struct SbGeodesic *l1,
                           const struct SbGeodesic *l2,
                           double tol,
                           char **out);

/**
 * Common perpendicular verdict JSON for a parallel pair.
 */
enum SbStatus sb_common_perpendicular(const struct SbGeodesic *l1,
                                      const struct SbGeodesic *l2,
                                      double tol,
                                      char **out);

/**
 * Full pair classification JSON.
 */
enum SbStatus sb_classify_pair(const struct SbGeodesic *l1,
                               const struct SbGeodesic *l2,
                               double tol,
                               char **out);

/**
 * Upper half-plane image `{"z":...,"theta":...}` (complex coefficients).
 */
enum SbStatus sb_map_uhp(const struct SbVector *p, double tol, char **out);

/**
 * Poincare-disk body coordinates of a point of IH.
 */
enum SbStatus sb_body_to_disk(const struct SbVector *p, double tol, double *px, double *py);

/**
 * Sample a geodesic's body curve; returns CSV text `t,px,py`.
 */
enum SbStatus sb_plot_body(const struct SbGeodesic *line,
                           uint32_t samples,
                           double t_min,
                           double t_max,
                           double tol,
                           char **out);

/**
 * Run the property suites; returns the JSON summary and `Ok` only when all
 * suites passed.
 */
enum SbStatus sb_selftest(uint8_t gens,
                          uint32_t trials,
                          uint64_t seed,
                          double fermionic_scale,
                          char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SUPERBOLIC_H */
