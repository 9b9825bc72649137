#ifndef PASSAGE_H
#define PASSAGE_H

/* Generated by cbindgen from the passage-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every `passage_*` entry point.
typedef enum PassageStatus {
  PASSAGE_STATUS_OK = 0,
  // A precondition on the inputs was violated.
  PASSAGE_STATUS_DOMAIN = 1,
  // The operation is undefined at the critical premium rate.
  PASSAGE_STATUS_CRITICAL_RATE = 2,
  // Quadrature or root refinement missed its tolerance.
  PASSAGE_STATUS_NO_CONVERGENCE = 3,
  // A series needed more terms than the hard cap.
  PASSAGE_STATUS_TRUNCATION_BOUND = 4,
  // The capital equation has no root in the search bracket.
  PASSAGE_STATUS_NO_BRACKET = 5,
  // A law string could not be parsed or has invalid parameters.
  PASSAGE_STATUS_INVALID_LAW = 6,
  // A required pointer argument was null.
  PASSAGE_STATUS_NULL_POINTER = 7,
  // The library panicked; the result pointer is untouched.
  PASSAGE_STATUS_PANIC = 8,
} PassageStatus;

// Opaque law handle; create with `passage_law_parse`, release with
// `passage_law_free`.
typedef struct PassageLaw PassageLaw;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static description of a status code.
const char *passage_status_describe(enum PassageStatus status);

// Exact Type I c.d.f. P{tau(u,c) <= t} for exponential T and Y.
// `t` may be infinity (dispatches to the ruin probability).
enum PassageStatus passage_type1_cdf(double lam_t,
                                     double lam_y,
                                     double c,
                                     double u,
                                     double t,
                                     double *out);

// Exact Type II c.d.f. (series-integral route).
enum PassageStatus passage_type2_cdf(double lam_t,
                                     double lam_y,
                                     double c,
                                     double u,
                                     double t,
                                     double *out);

// Exact Type III c.d.f. (oscillatory-integral route).
enum PassageStatus passage_type3_cdf(double lam_t,
                                     double lam_y,
                                     double c,
                                     double u,
                                     double t,
                                     double *out);

// P{tau(u,c) < infinity}.
enum PassageStatus passage_ruin_prob(double lam_t, double lam_y, double c, double u, double *out);

// Conditional law P{v < tau <= t | T1 = v} for exponential T and Y.
enum PassageStatus passage_conditional_cdf(double lam_t,
                                           double lam_y,
                                           double c,
                                           double u,
                                           double t,
                                           double v,
                                           double *out);

// Type II re-derived through the random-walk decomposition.
enum PassageStatus passage_type2_via_walk(double lam_t,
                                          double lam_y,
                                          double c,
                                          double u,
                                          double t,
                                          double *out);

// Normal approximation below the critical rate.
enum PassageStatus passage_normal_below(double lam_t,
                                        double lam_y,
                                        double c,
                                        double u,
                                        double t,
                                        double *out);

// Normal approximation above the critical rate.
enum PassageStatus passage_normal_above(double lam_t,
                                        double lam_y,
                                        double c,
                                        double u,
                                        double t,
                                        double *out);

// Crossing c.d.f. of a drifted Brownian motion net of premium rate `c`.
enum PassageStatus passage_diffusion_crossing_cdf(double drift,
                                                  double sigma2,
                                                  double c,
                                                  double u,
                                                  double t,
                                                  double *out);

// Diffusion approximation with moments matched to the exponential model.
enum PassageStatus passage_diffusion_approx(double lam_t,
                                            double lam_y,
                                            double c,
                                            double u,
                                            double t,
                                            double *out);

// Inverse-Gaussian conditional kernel A_M(u,c | t,v).
enum PassageStatus passage_ig_kernel(double big_m,
                                     double d2,
                                     double u,
                                     double c,
                                     double t,
                                     double v,
                                     double *out);

// A(u,c | infinity).
enum PassageStatus passage_ig_kernel_infty(double big_m,
                                           double d2,
                                           double u,
                                           double c,
                                           double *out);

// Critical-rate closed form A(u,c*|t); `t` may be infinity.
enum PassageStatus passage_ig_kernel_at_critical(double big_m,
                                                 double d2,
                                                 double u,
                                                 double t,
                                                 double *out);

// Teugels-type large-t expansion, clamped to [0, 1].
enum PassageStatus passage_teugels_cdf(double big_m,
                                       double d2,
                                       double u,
                                       double c,
                                       double t,
                                       double *out);

// Large-t form in the exponential-rate parameterization.
enum PassageStatus passage_large_t_exp_form(double lam_t,
                                            double lam_y,
                                            double c,
                                            double u,
                                            double t,
                                            double *out);

// Position p.m.f. P{xi_p(y) = k} of the random walk with random
// displacements (k may be negative).
enum PassageStatus passage_walk_pmf(double p, double y, int64_t k, double *out);

// First-hitting-time c.d.f. P{sigma_k(p) <= y}.
enum PassageStatus passage_hitting_cdf(double p, uint32_t k, double y, double *out);

// Parse a law specification such as "exponential(2)", "gamma(2,0.5)",
// "pareto(2.5,1)" or "deterministic(0.5)". On success writes a heap
// handle the caller owns.
//
// # Safety
// `spec` must be a valid NUL-terminated string and `out` a valid pointer.
enum PassageStatus passage_law_parse(const char *spec, struct PassageLaw **out);

// Release a law handle. A null handle is a no-op.
//
// # Safety
// `law` must have come from `passage_law_parse` and not be freed twice.
void passage_law_free(struct PassageLaw *law);

// Mean, variance, and raw third moment of a law; `has_third` is 0 when the
// third moment does not exist (Pareto with index <= 3) and `third` is then
// left untouched.
//
// # Safety
// All pointers must be valid; `law` must be a live handle.
enum PassageStatus passage_law_moments(const struct PassageLaw *law,
                                       double *mean,
                                       double *variance,
                                       double *third,
                                       int *has_third);

// Monte Carlo estimate of P{tau(u,c) <= t} for laws given as handles.
// `workers` <= 0 uses the available parallelism. Bit-identical for a fixed
// seed regardless of the worker count.
//
// # Safety
// Law handles must be live; `p_hat` and `std_err` must be valid pointers.
enum PassageStatus passage_mc_first_passage(const struct PassageLaw *t1,
                                            const struct PassageLaw *t_law,
                                            const struct PassageLaw *y_law,
                                            double c,
                                            double u,
                                            double t,
                                            uint64_t n_paths,
                                            uint64_t seed,
                                            int workers,
                                            double *p_hat,
                                            double *std_err);

// Solve P{tau(u,c) <= t} = alpha for u against the exact exponential
// backend.
enum PassageStatus passage_capital_solve_exact(double lam_t,
                                               double lam_y,
                                               double alpha,
                                               double t,
                                               double c,
                                               double *out_u);

// Solve the capital equation against the inverse-Gaussian kernel backend.
enum PassageStatus passage_capital_solve_kernel(double big_m,
                                                double d2,
                                                double alpha,
                                                double t,
                                                double c,
                                                double *out_u);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PASSAGE_H */
