#ifndef BORELL_LAB_H
#define BORELL_LAB_H

/* C interface to the verification toolkit.  Objects cross the boundary as
 * opaque handles; every call returns a status code and leaves a readable
 * message for bl_last_error() on failure.  Extended-real exponents are passed
 * as doubles, with +/-infinity meaning the two infinite exponents. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bl_status {
    BL_OK = 0,
    BL_ERR_NULL = 1,             /* required pointer argument was NULL */
    BL_ERR_INVALID_ARGUMENT = 2, /* contract violation (bad exponent, file, ...) */
    BL_ERR_DOMAIN = 3,           /* valid inputs outside an operation's domain */
    BL_ERR_RUNTIME = 4           /* everything else (I/O, sampling caps, ...) */
} bl_status;

/* Message for the most recent failure on this thread; never NULL. */
const char* bl_last_error(void);

typedef struct bl_grid bl_grid;
typedef struct bl_body bl_body;
typedef struct bl_measure bl_measure;
typedef struct bl_transport bl_transport;

/* One verification outcome.  margin is oriented so that
 * satisfied == (margin >= -tolerance). */
typedef struct bl_report {
    double lhs;
    double rhs;
    double margin;
    double tolerance;
    int satisfied;
    int64_t samples;
    char witness[256];
} bl_report;

/* ---- weighted power means ---- */

bl_status bl_mean(double s, double lambda, double a, double b, double* out);
bl_status bl_holder_check(double alpha, double beta, double gamma, double lambda, double a,
                          double b, double c, double d, double tolerance, bl_report* out);

/* ---- grid functions ---- */

bl_status bl_grid_load(const char* path, bl_grid** out);
bl_status bl_grid_create(size_t dim, const double* box_min, const double* box_max,
                         const int64_t* shape, const double* values, size_t n_values,
                         bl_grid** out);
bl_status bl_grid_save(const bl_grid* grid, const char* path);
void bl_grid_free(bl_grid* grid);
bl_status bl_grid_dim(const bl_grid* grid, size_t* out);
bl_status bl_grid_integrate(const bl_grid* grid, double* out);
bl_status bl_grid_concavity_check(const bl_grid* grid, double alpha, int64_t n_pairs,
                                  uint64_t seed, double tolerance, bl_report* out);

/* ---- symmetric convex bodies ---- */

/* planar_m: direction count used when the file holds a polygon (min 8). */
bl_status bl_body_load(const char* path, int64_t planar_m, bl_body** out);
bl_status bl_body_save(const bl_body* body, const char* path);
void bl_body_free(bl_body* body);
bl_status bl_body_dim(const bl_body* body, size_t* out);
bl_status bl_body_is_polygon(const bl_body* body, int* out);
bl_status bl_body_combine(const bl_body* k, const bl_body* l, double lambda, double p,
                          bl_body** out);
/* Exact planar area of the halfplane intersection (dim 2 only). */
bl_status bl_body_planar_area(const bl_body* body, double* out);
bl_status bl_body_mc_volume(const bl_body* body, int64_t n_samples, uint64_t seed,
                            double* estimate, double* stderr_out);

/* ---- 1-d monotone transport ---- */

bl_status bl_transport_compute(const bl_grid* f, const bl_grid* g, bl_transport** out);
void bl_transport_free(bl_transport* t);
bl_status bl_transport_size(const bl_transport* t, size_t* out);
bl_status bl_transport_row(const bl_transport* t, size_t i, double* x, double* tx, double* dtx);
bl_status bl_transport_residual(const bl_grid* f, const bl_grid* g, const bl_transport* t,
                                double* out);
/* phi_spec: "affine:lambda=..." or "powermean:p=...,lambda=...";
 * combiner_spec: "mean:s=...,lambda=..." or "minkowski:n=...". */
bl_status bl_transport_certify(const bl_grid* f, const bl_grid* g, const char* phi_spec,
                               const char* combiner_spec, double tolerance, bl_report* out);

/* ---- inequality verifiers ---- */

bl_status bl_check_hypothesis(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                              const char* phi_spec, const char* combiner_spec, int64_t n_xy,
                              int64_t n_scale, uint64_t seed, double tolerance, bl_report* out);
bl_status bl_check_conclusion(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                              const char* combiner_spec, double tolerance, bl_report* out);
bl_status bl_check_tensorize(const bl_grid* f, const bl_grid* g, const bl_grid* h,
                             const char* phi_spec, const char* combiner_spec, int64_t n_xy,
                             int64_t n_scale, uint64_t seed, double tolerance, bl_report* out);
/* Builds the minimal sup-convolution h for (f, g, gamma, lambda) and checks
 * integrate(h) >= M_e^lambda(integrate f, integrate g) with the corollary
 * exponent e; p < 1 routes through the curved combination (scalar p). */
bl_status bl_check_bbl(const bl_grid* f, const bl_grid* g, double gamma, double lambda,
                       double tolerance, bl_report* out);
bl_status bl_check_nonlinear(const bl_grid* f, const bl_grid* g, double p, double gamma,
                             double lambda, double tolerance, bl_report* out);

/* ---- measures and planar conjecture checks ---- */

bl_status bl_measure_create(const bl_grid* density, double alpha, int symmetric,
                            double alpha_tolerance, bl_measure** out);
void bl_measure_free(bl_measure* mu);
bl_status bl_measure_of_body(const bl_measure* mu, const bl_body* body, double* out);
bl_status bl_check_lp_bm(const bl_measure* mu, const bl_body* k, const bl_body* l, double lambda,
                         double p, double tolerance, bl_report* out);
bl_status bl_check_pipeline(const bl_measure* mu, const bl_body* k, const bl_body* l,
                            double lambda, double p, int64_t n_thresholds, double tolerance,
                            bl_report* out);
bl_status bl_check_inclusion(const bl_body* k0, const bl_body* k1, double lambda, double p,
                             int64_t n_points, uint64_t seed, bl_report* out);
/* Exact planar check; both bodies must come from polygon files.  p = 0 is the
 * log-Minkowski case. */
bl_status bl_check_lp_planar(const bl_body* k, const bl_body* l, double lambda, double p,
                             int64_t m_directions, double tolerance, bl_report* out);
/* Seeded sweep over random symmetric polygon pairs; fills rows[0..trials). */
bl_status bl_sweep_planar(int64_t trials, uint64_t seed, double p, double lambda,
                          int64_t m_directions, bl_report* rows);

#ifdef __cplusplus
}
#endif

#endif /* BORELL_LAB_H */
