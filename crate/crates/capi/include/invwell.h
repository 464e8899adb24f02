#ifndef INVWELL_H
#define INVWELL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every API call.
 */
enum InvwellStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  InvwellStatus_Ok = 0,
  InvwellStatus_NullPointer = 1,
  InvwellStatus_InvalidArgument = 2,
  InvwellStatus_Regime = 3,
  InvwellStatus_Dimension = 4,
  InvwellStatus_Convergence = 5,
  InvwellStatus_Step = 6,
  InvwellStatus_Frame = 7,
  InvwellStatus_Internal = 8,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum InvwellStatus InvwellStatus;
#else
typedef int32_t InvwellStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Coupling regime relative to the exceptional point.
 */
enum InvwellRegime
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  InvwellRegime_BelowEp = 0,
  InvwellRegime_AtEp = 1,
  InvwellRegime_AboveEp = 2,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum InvwellRegime InvwellRegime;
#else
typedef int32_t InvwellRegime;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Member of the dual eigenfunction family.
 */
enum InvwellFamily
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  InvwellFamily_Ket = 0,
  InvwellFamily_Bra = 1,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum InvwellFamily InvwellFamily;
#else
typedef int32_t InvwellFamily;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Opaque model handle created by [`invwell_model_new`].
 */
typedef struct InvwellModel InvwellModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread; never free
 * it.
 */
const char *invwell_last_error_message(void);

/**
 * Create a model handle. `tol <= 0` selects the default tolerance.
 * On success writes the handle to `out`; release it with
 * [`invwell_model_free`].
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one pointer.
 */
InvwellStatus invwell_model_new(double omega,
                                double g,
                                uintptr_t truncation,
                                double tol,
                                struct InvwellModel **out);

/**
 * Release a handle returned by [`invwell_model_new`]. A null pointer is
 * a no-op.
 *
 * # Safety
 * `model` must be a pointer previously returned by [`invwell_model_new`]
 * and not freed since.
 */
void invwell_model_free(struct InvwellModel *model);

/**
 * Regime tag and effective frequency `√|Ω²−G²|`.
 *
 * # Safety
 * `model` must be a live handle; `regime_out` and `value_out` must be
 * valid for writes when non-null (at least one must be non-null).
 */
InvwellStatus invwell_effective_frequency(const struct InvwellModel *model,
                                          InvwellRegime *regime_out,
                                          double *value_out);

/**
 * Squeeze parameter `η` with `sinh η = G/√(Ω²−G²)`; fails with
 * `Regime` at or beyond the exceptional point.
 *
 * # Safety
 * `model` must be a live handle and `eta_out` valid for one write.
 */
InvwellStatus invwell_eta(const struct InvwellModel *model, double *eta_out);

/**
 * Potential profile `V(x)` for `len` sample points.
 *
 * # Safety
 * `xs` must point to `len` readable doubles and `vs_out` to `len`
 * writable doubles.
 */
InvwellStatus invwell_potential_profile(const struct InvwellModel *model,
                                        const double *xs,
                                        uintptr_t len,
                                        double *vs_out);

/**
 * The lowest `levels` eigenvalues of the regime-appropriate spectrum
 * (ket branch below the exceptional point, the analytic continuation
 * above it), written as split real/imaginary arrays.
 *
 * # Safety
 * `re_out` and `im_out` must each point to `levels` writable doubles.
 */
InvwellStatus invwell_spectrum_levels(const struct InvwellModel *model,
                                      uintptr_t levels,
                                      double *re_out,
                                      double *im_out);

/**
 * Distances of the computed spectrum from the eigenvalue law
 * (`±iΓ_I(n+½)` below the point, `Γ(n+½)` above).
 *
 * # Safety
 * `residuals_out` must point to `levels` writable doubles.
 */
InvwellStatus invwell_eigenvalue_law_residuals(const struct InvwellModel *model,
                                               uintptr_t levels,
                                               double *residuals_out);

/**
 * Evaluate a normalized dual-family eigenfunction at `x` for frequency
 * `freq`.
 *
 * # Safety
 * `re_out` and `im_out` must be valid for one write each.
 */
InvwellStatus invwell_eigenfunction_eval(InvwellFamily family,
                                         uintptr_t n,
                                         double x,
                                         double freq,
                                         double *re_out,
                                         double *im_out);

/**
 * Residual of the classical gauge identity
 * `|H(x(X,P), p(X,P)) − Γ_I(P²−X²)/2|` at one transformed-frame point.
 *
 * # Safety
 * `residual_out` must be valid for one write.
 */
InvwellStatus invwell_gauge_residual(const struct InvwellModel *model,
                                     double x_re,
                                     double x_im,
                                     double p_re,
                                     double p_im,
                                     double *residual_out);

/**
 * Integrate the original-frame complex flow and write the endpoint as
 * `[re x, im x, re p, im p, re H, im H]`.
 *
 * # Safety
 * `out6` must point to six writable doubles.
 */
InvwellStatus invwell_orbit_endpoint(const struct InvwellModel *model,
                                     double x0_re,
                                     double x0_im,
                                     double p0_re,
                                     double p0_im,
                                     double dt,
                                     uintptr_t steps,
                                     double *out6);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVWELL_H */
