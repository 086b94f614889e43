/* C API for the wehrl library: concentration, generalized Wehrl entropy and
 * kernel-distance functionals of homogeneous polynomials on the sphere, plus
 * the batch experiment runners. All objects are opaque handles; functions
 * return wehrl_status and report detail through wehrl_last_error(). */
#ifndef WEHRL_H
#define WEHRL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wehrl_status {
    WEHRL_OK = 0,
    WEHRL_ERR_NULL_ARGUMENT = 1,
    WEHRL_ERR_INVALID_ARGUMENT = 2, /* bad config, domain error, parse error */
    WEHRL_ERR_IO = 3,
    WEHRL_ERR_NUMERIC = 4, /* non-convergence or numerical failure */
} wehrl_status;

typedef struct wehrl_poly wehrl_poly;
typedef struct wehrl_state wehrl_state;
typedef struct wehrl_profile wehrl_profile;

/* Message for the most recent failure on this thread. */
const char* wehrl_last_error(void);

const char* wehrl_version(void);

/* ---- polynomials (complex vectors are interleaved re,im pairs) ---- */

wehrl_status wehrl_poly_load(const char* path, wehrl_poly** out);
wehrl_status wehrl_poly_from_json(const char* json_text, wehrl_poly** out);
/* K_N(., eta); eta has d+1 complex entries. */
wehrl_status wehrl_poly_kernel(int d, int N, const double* eta, wehrl_poly** out);
wehrl_status wehrl_poly_random(int d, int N, uint64_t seed, wehrl_poly** out);
void wehrl_poly_free(wehrl_poly* p);

int wehrl_poly_dim(const wehrl_poly* p);
int wehrl_poly_degree(const wehrl_poly* p);
wehrl_status wehrl_poly_norm(const wehrl_poly* p, double* out);
/* zeta has d+1 complex entries. */
wehrl_status wehrl_poly_eval(const wehrl_poly* p, const double* zeta, double* re, double* im);
wehrl_status wehrl_poly_to_json(const wehrl_poly* p, char** out_json);
void wehrl_string_free(char* s);

/* ---- functionals ---- */

/* T = sup |Q|^2; argmax (optional) receives 2(d+1) doubles. */
wehrl_status wehrl_sup_modulus(const wehrl_poly* p, uint64_t seed, double* T, double* argmax);
/* argmax (optional) receives the 2(d+1) doubles of the nearest kernel center. */
wehrl_status wehrl_distance_to_kernels(const wehrl_poly* p, uint64_t seed, double* D,
                                       double* argmax);

/* phi: "linear" | "xlogx" | "power:P" | "hinge:T0". stderr_out is set to a
 * negative value when the result is exact. rule_degree > 0 forces the exact
 * product rule of that degree budget (polynomial phi only); 0 selects the
 * automatic route. */
wehrl_status wehrl_entropy(const wehrl_poly* p, const char* phi, uint64_t seed, size_t samples,
                           int rule_degree, double* value, double* stderr_out);

/* Concentration on a cap of level t centered at eta (exact). */
wehrl_status wehrl_concentration_cap(const wehrl_poly* p, const double* eta, double t,
                                     double* value);
/* Concentration on the optimal superlevel set of measure omega (Monte Carlo). */
wehrl_status wehrl_concentration_superlevel(const wehrl_poly* p, double omega, uint64_t seed,
                                            size_t samples, double* value, double* stderr_out,
                                            double* threshold_out);

wehrl_status wehrl_extremal_entropy(int d, int N, const char* phi, double* value);
wehrl_status wehrl_extremal_concentration(int d, int N, double omega, double* value);
wehrl_status wehrl_cap_measure(int d, int N, double t, double* value);
wehrl_status wehrl_alpha_coefficient(int d, int N, double omega, double omega_tilde,
                                     double* value);

/* ---- level profiles ---- */

wehrl_status wehrl_profile_build(const wehrl_poly* p, uint64_t seed, size_t samples,
                                 wehrl_profile** out);
void wehrl_profile_free(wehrl_profile* pr);
wehrl_status wehrl_profile_mu(const wehrl_profile* pr, double t, double* out);
wehrl_status wehrl_profile_quantile(const wehrl_profile* pr, double s, double* out);
/* CSV columns: t, mu_empirical, mu0, diff on a uniform 1000-point grid. */
wehrl_status wehrl_profile_export_csv(const wehrl_profile* pr, const char* path);

/* ---- density states ---- */

wehrl_status wehrl_state_load(const char* path, wehrl_state** out);
wehrl_status wehrl_state_from_json(const char* json_text, wehrl_state** out);
void wehrl_state_free(wehrl_state* st);
wehrl_status wehrl_state_husimi(const wehrl_state* st, const double* zeta, double* out);
wehrl_status wehrl_state_entropy(const wehrl_state* st, const char* phi, uint64_t seed,
                                 size_t samples, double* value, double* stderr_out);
wehrl_status wehrl_state_concentration_cap(const wehrl_state* st, const double* eta, double t,
                                           double* value);
wehrl_status wehrl_state_trace_distance(const wehrl_state* st, uint64_t seed, double* value,
                                        double* argmin);

/* ---- experiment runners ----
 * config_json follows the sweep configuration schema; outputs are written to
 * out_csv (one row per record) and out_json (summary with config echo). */

wehrl_status wehrl_run_sweep_concentration(const char* config_json, const char* out_csv,
                                           const char* out_json);
wehrl_status wehrl_run_sweep_wehrl(const char* config_json, const char* out_csv,
                                   const char* out_json);
/* eps is a comma-separated list; report is returned as JSON text. */
wehrl_status wehrl_run_sharpness(int d, int N, const char* eps_csv, const char* phi,
                                 size_t samples, uint64_t seed, char** out_json);
/* poly_json selects the embedded polynomial f in affine coordinates (the
 * homogeneous file schema; the affine reading drops one degree in zeta_1);
 * pass NULL for f = 1. */
wehrl_status wehrl_run_fock_limit(const char* poly_json, const char* degrees_csv, double area,
                                  const char* phi, size_t samples, uint64_t seed,
                                  char** out_json);
wehrl_status wehrl_run_diff_audit(const char* config_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* WEHRL_H */
