#ifndef STRATUM_H
#define STRATUM_H

/* C interface to the stratum library: opaque handles, integer status
 * codes, and per-thread error text. All strings returned through char**
 * are heap-allocated; release them with stratum_free. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define STRATUM_OK 0
#define STRATUM_ERR_INVALID_INPUT 2
#define STRATUM_ERR_NUMERICAL 3
#define STRATUM_ERR_CERTIFICATE 4

const char* stratum_version(void);

/* Message from the last failing call on this thread; empty on success. */
const char* stratum_last_error(void);

void stratum_free(char* s);

/* ---- profiles ---------------------------------------------------- */

typedef struct stratum_profile stratum_profile;

stratum_profile* stratum_profile_load(const char* path);
void stratum_profile_free(stratum_profile* p);
double stratum_profile_area(const stratum_profile* p);
double stratum_profile_max_height(const stratum_profile* p);
int stratum_profile_is_lipschitz(const stratum_profile* p);

/* ---- configs ----------------------------------------------------- */

typedef struct stratum_config stratum_config;

stratum_config* stratum_config_load(const char* path);
void stratum_config_free(stratum_config* c);

/* ---- subcommand drivers ------------------------------------------ */

/* functional: "F", "F0", "Fdelta", or "Fdelta-relaxed"; delta > 0
 * overrides the config value. */
int stratum_run_evaluate(const char* profile_path, const char* config_path,
                         const char* functional, double delta,
                         char** out_csv);

int stratum_run_minimize(const char* config_path, const char* initial_path,
                         double target_area, double mu,
                         const double* lambdas, size_t n_lambdas, int knots,
                         uint64_t seed, const char* out_profile_path,
                         char** out_csv);

int stratum_run_gamma_sweep(const char* profile_path, const char* config_path,
                            const double* deltas, size_t n_deltas,
                            int with_lift, char** out_csv);

/* mode: "auto", "wetting", or "dewetting". */
int stratum_run_relax_sequence(const char* profile_path,
                               const char* config_path, int steps, double r,
                               const char* mode, char** out_csv);

int stratum_run_check_ball(const char* profile_path, double rho,
                           double spacing, char** out_report);

int stratum_make_manifest(const char* profile_path, const char* config_path,
                          uint64_t seed, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* STRATUM_H */
