/*
 * tpkrige - spatial kriging for replicated temporal point processes.
 *
 * C interface to the core library: opaque handles, integer status codes,
 * and a thread-local error message. Every object returned through an
 * out-parameter must be released with the matching *_free function.
 */
#ifndef TPKRIGE_H
#define TPKRIGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tpk_status {
    TPK_OK = 0,
    TPK_ERR_NUMERIC = 1, /* singular system, failed factorization */
    TPK_ERR_INVALID = 2, /* bad arguments, malformed input, usage errors */
} tpk_status;

/* Message describing the most recent failure on this thread. */
const char* tpk_last_error(void);

const char* tpk_version(void);

/* ------------------------------------------------------------------ */
/* Run configuration: plain `key = value` text, flags layered on top.  */

typedef struct tpk_config tpk_config;

tpk_status tpk_config_create(tpk_config** out);
tpk_status tpk_config_load(const char* path, tpk_config** out);
tpk_status tpk_config_set(tpk_config* config, const char* key, const char* value);
/* Copies the value into buf (NUL-terminated); TPK_ERR_INVALID when the key
 * is absent or the buffer is too small. */
tpk_status tpk_config_get(const tpk_config* config, const char* key, char* buf, size_t size);
void tpk_config_free(tpk_config* config);

/* ------------------------------------------------------------------ */
/* Point patterns.                                                     */

typedef struct tpk_pattern tpk_pattern;

/* Event CSV (`replicate,site,time`) against a site CSV (`site,x,y`) and a
 * time domain [a, b]. */
tpk_status tpk_pattern_from_events(const char* events_csv, const char* sites_csv, double a,
                                   double b, tpk_pattern** out);

/* Trip CSV (`station,start_time` with ISO timestamps) plus a calendar of
 * ISO dates; every calendar date becomes a replicate on [0, 24]. */
tpk_status tpk_pattern_from_trips(const char* trips_csv, const char* sites_csv,
                                  const char* calendar_path, tpk_pattern** out);

tpk_status tpk_pattern_save_events(const tpk_pattern* pattern, const char* path);
int tpk_pattern_replicates(const tpk_pattern* pattern);
int tpk_pattern_sites(const tpk_pattern* pattern);
void tpk_pattern_free(tpk_pattern* pattern);

/* Forward declaration; see the fit section below. Reads an event CSV using
 * the time domain recorded in a fit, so callers need not restate it. */
typedef struct tpk_fit tpk_fit;
tpk_status tpk_pattern_from_events_with_fit_domain(const tpk_fit* fit, const char* events_csv,
                                                   const char* sites_csv, tpk_pattern** out);

/* ------------------------------------------------------------------ */
/* Moment estimation and surface fits.                                 */

/* Runs moment estimation and the penalized surface fits with smoothing
 * weights selected by generalized cross-validation. Honored config keys
 * (defaults in parentheses): time_order (4), time_knots (5),
 * space_order (4), space_knots (6), region_x0/x1/y0/y1 (site bounding
 * box), xi_min (1e-6), xi_max (1e6), xi_points (25). */
tpk_status tpk_fit_compute(const tpk_pattern* pattern, const tpk_config* config,
                           tpk_fit** out);

/* Writes A, M, Sigma, B, C as CSV matrices plus manifest.json and the two
 * GCV curves into the directory (created if missing). */
tpk_status tpk_fit_save(const tpk_fit* fit, const char* directory);
tpk_status tpk_fit_load(const char* directory, tpk_fit** out);

tpk_status tpk_fit_info(const tpk_fit* fit, double* xi_mean, double* df_mean, double* xi_cov,
                        double* df_cov);
void tpk_fit_free(tpk_fit* fit);

/* ------------------------------------------------------------------ */
/* Kriging at a target site.                                           */

typedef struct tpk_krige tpk_krige;

tpk_status tpk_krige_solve(const tpk_fit* fit, double x, double y, double threshold_m,
                           double threshold_sigma, tpk_krige** out);

int tpk_krige_rank_m(const tpk_krige* solution);
int tpk_krige_rank_sigma(const tpk_krige* solution);
double tpk_krige_spe(const tpk_krige* solution);
tpk_status tpk_krige_weights(const tpk_krige* solution, double* out, size_t size);

/* weights.csv (site,weight) + solution.json (target, ranks, thresholds,
 * estimated prediction error). */
tpk_status tpk_krige_save(const tpk_krige* solution, const char* directory);
tpk_status tpk_krige_load(const char* directory, const tpk_fit* fit, tpk_krige** out);

/* Per-replicate predicted count curves sampled on a uniform grid, written
 * as CSV with header replicate,time,count. */
tpk_status tpk_krige_predict_counts(const tpk_krige* solution, const tpk_pattern* pattern,
                                    int grid_points, const char* out_csv);

/* Root average squared error between the held-out station's observed
 * counts and the weighted predictions built from `pattern`. The held-out
 * pattern must have one site and the same replicate count. */
tpk_status tpk_krige_count_error(const tpk_krige* solution, const tpk_pattern* pattern,
                                 const tpk_pattern* holdout, double* out_error);

void tpk_krige_free(tpk_krige* solution);

/* ------------------------------------------------------------------ */
/* Monte Carlo study.                                                  */

/* Runs the simulation study described by a study config file and writes
 * the relative-error table (plus a long-format detail file with suffix
 * `.detail.csv`). */
tpk_status tpk_study_run(const char* config_path, const char* out_csv);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TPKRIGE_H */
