#ifndef LAMBERT_CREEP_H
#define LAMBERT_CREEP_H

/*
 * C interface to the Lambert-W creep library.
 *
 * All entry points take an opaque context holding the numerical
 * configuration and report failures through status codes; the message
 * behind the most recent failure is kept on the context. A context is not
 * synchronized: use one context per thread when evaluating in parallel.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lc_status {
  LC_OK = 0,
  LC_ERR_DOMAIN = 1,      /* input outside the mathematical domain */
  LC_ERR_CONVERGENCE = 2, /* iteration failed to reach tolerance */
  LC_ERR_CUT = 3,         /* argument on the branch cut */
  LC_ERR_METHOD = 4,      /* method cannot evaluate the operand */
  LC_ERR_GRID = 5,        /* malformed or too-coarse grid */
  LC_ERR_IO = 6,          /* filesystem failure */
  LC_ERR_ARGUMENT = 7,    /* null pointer or invalid configuration value */
  LC_ERR_INTERNAL = 8     /* any other failure */
} lc_status;

typedef struct lc_context lc_context;

lc_context* lc_context_new(void);
void lc_context_free(lc_context* ctx);

/* Library version, "major.minor.patch". */
const char* lc_version(void);

/* Message of the most recent failure on this context; "" after success.
 * The pointer stays valid until the next call on the same context. */
const char* lc_last_error(const lc_context* ctx);

/* ---- configuration ----------------------------------------------------- */

/* tail_policy: 0 none, 1 analytic tail, 2 log substitution. */
lc_status lc_set_quadrature(lc_context* ctx, double abs_tol, double rel_tol,
                            int max_subdivisions, double truncation_point,
                            int tail_policy);

/* method: 0 Gaver-Stehfest, 1 Talbot. gs_terms must be even, in [2, 20]. */
lc_status lc_set_inversion(lc_context* ctx, int method, int gs_terms,
                           int talbot_nodes);

/* "lambert" (default) or "linear" (the analytic oracle psi(t) = t).
 * The test model feeds the relaxation routes only. */
lc_status lc_set_test_model(lc_context* ctx, const char* name);

/* JSON overrides: {"quadrature": {...}, "inversion": {...},
 * "tolerances": {check_name: tol, ...}}. Fields mirror the setter
 * parameters; tail_policy and method are spelled as strings. Unknown keys
 * are rejected. */
lc_status lc_config_from_json(lc_context* ctx, const char* json_text);

/* ---- scalar evaluations ------------------------------------------------ */

lc_status lc_w0(lc_context* ctx, double x, double* out);
lc_status lc_w0_prime(lc_context* ctx, double t, double* out);
/* log t - log log t, defined for t > e. */
lc_status lc_w0_asym(lc_context* ctx, double t, double* out);
/* large-argument form of the derivative, defined for t > 1. */
lc_status lc_w0_prime_asym(lc_context* ctx, double t, double* out);
lc_status lc_psi(lc_context* ctx, double t, double* out);
lc_status lc_psi_prime(lc_context* ctx, double t, double* out);

/* Dimensional material functions J(t) = J0 (1 + q psi(t)) and
 * G(t) = phi(t)/J0 for J0 > 0, q > 0. */
lc_status lc_creep_compliance(lc_context* ctx, double J0, double q, double t,
                              double* out);
lc_status lc_relaxation_modulus(lc_context* ctx, double J0, double q, double t,
                                double* out);

/* ---- spectral functions ------------------------------------------------ */

/* rho(u); exact zero for u <= 1/e. est_error is a round-off-level bound. */
lc_status lc_spectrum_rho(lc_context* ctx, double u, double* value,
                          double* est_error);
/* rho(u)/u on the same terms. */
lc_status lc_spectrum_rho_over_u(lc_context* ctx, double u, double* value,
                                 double* est_error);
/* K(r) with the quadrature error estimate. */
lc_status lc_spectrum_K(lc_context* ctx, double r, double* value,
                        double* est_error);
/* H(tau) = K(1/tau)/tau^2, tau > 0. */
lc_status lc_spectrum_H(lc_context* ctx, double tau, double* value,
                        double* est_error);
/* Stieltjes reconstruction of psi'(t) from rho, t >= 0 (round-trip probe). */
lc_status lc_psi_prime_from_rho(lc_context* ctx, double t, double* value,
                                double* est_error);

/* ---- relaxation function ----------------------------------------------- */

/* phi at the given times (all >= 0) by inverse Laplace transform.
 * values and unstable must hold n entries; unstable[i] is set to 1 when
 * the reduced-order stability probe disagrees at times[i]. */
lc_status lc_phi_laplace(lc_context* ctx, const double* times, size_t n,
                         double* values, int* unstable);

/* phi on the uniform grid t_max * i / steps, i = 0..steps, by the
 * time-domain Volterra solver. times and values must hold steps + 1
 * entries; *step_warning is set to 1 when halving the internal step still
 * moves the solution by more than 1e-4. */
lc_status lc_phi_volterra(lc_context* ctx, double t_max, int steps,
                          double* times, double* values, int* step_warning);

/* ---- validation -------------------------------------------------------- */

/* Runs the full identity suite under the context configuration (tolerance
 * overrides from lc_config_from_json apply). The report, rendered as JSON
 * when as_json is nonzero and line-oriented text otherwise, is returned in
 * *out_report and must be released with lc_string_free. *all_pass is set
 * to 1 when every check passed. */
lc_status lc_validate(lc_context* ctx, int as_json, char** out_report,
                      int* all_pass);

void lc_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LAMBERT_CREEP_H */
