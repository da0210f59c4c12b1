/* Adaptive reaching-phase sliding mode simulation library, C interface.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_destroy function. Every fallible call returns an
 * arps_status; on failure arps_last_error() describes the problem for the
 * calling thread until its next failing call.
 */
#ifndef ARPS_H
#define ARPS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ARPS_API __declspec(dllexport)
#else
#define ARPS_API __attribute__((visibility("default")))
#endif

typedef enum arps_status {
    ARPS_OK = 0,
    ARPS_ERR_INVALID_ARGUMENT = 1,
    ARPS_ERR_CONFIG = 2,
    ARPS_ERR_SIMULATION = 3,
    ARPS_ERR_IO = 4,
    ARPS_ERR_DOMAIN = 5,
    ARPS_ERR_INTERNAL = 6
} arps_status;

typedef enum arps_run_status {
    ARPS_RUN_COMPLETED = 0,
    ARPS_RUN_STOPPED_AT_REACH = 1,
    ARPS_RUN_HORIZON_EXCEEDED = 2,
    ARPS_RUN_BARRIER_BREACHED = 3,
    ARPS_RUN_NON_FINITE = 4,
    ARPS_RUN_SINGULAR_MATRIX = 5
} arps_run_status;

typedef enum arps_sweep_status {
    ARPS_SWEEP_REACHED = 0,
    ARPS_SWEEP_HORIZON_EXCEEDED = 1,
    ARPS_SWEEP_FAULT = 2
} arps_sweep_status;

typedef struct arps_config arps_config;
typedef struct arps_runs arps_runs;
typedef struct arps_sweep arps_sweep;

ARPS_API const char* arps_version(void);
ARPS_API const char* arps_last_error(void);
ARPS_API const char* arps_status_name(arps_status s);

/* Configuration ----------------------------------------------------------- */

ARPS_API arps_status arps_config_create(arps_config** out);
ARPS_API void arps_config_destroy(arps_config* cfg);
/* scenario_override < 0 keeps whatever the file selects. */
ARPS_API arps_status arps_config_load(arps_config* cfg, const char* path, int scenario_override);
ARPS_API arps_status arps_config_set(arps_config* cfg, const char* key, const char* value);
/* Copies the value with its terminator into buf; *needed gets the full
 * length including the terminator. A non-null buf that is too small yields
 * ARPS_ERR_INVALID_ARGUMENT. Pass buf = NULL to query the size. */
ARPS_API arps_status arps_config_get(const arps_config* cfg, const char* key, char* buf,
                                     size_t buflen, size_t* needed);
ARPS_API arps_status arps_config_apply_scenario(arps_config* cfg, int scenario);
ARPS_API arps_status arps_config_apply_dense(arps_config* cfg);
/* Resolved key = value dump; loading it reproduces the configuration. */
ARPS_API arps_status arps_config_write(const arps_config* cfg, const char* path);

ARPS_API size_t arps_config_key_count(void);
ARPS_API const char* arps_config_key_name(size_t i);
ARPS_API const char* arps_config_key_default(size_t i);
ARPS_API const char* arps_config_key_help(size_t i);

/* Closed-loop runs --------------------------------------------------------- */

typedef struct arps_run_info {
    arps_run_status status;
    int reached;
    double t_bar;
    double norm_at_reach;
    double max_norm_after_switch;
    double max_lambda;
    double epsilon;
    int has_T_c;
    double T_c;
    double final_t;
    size_t samples;
    int passed; /* reached before T_c and stayed inside eps afterwards */
} arps_run_info;

/* One run per configured initial condition. Faults inside a run are reported
 * through arps_run_info, not the return status. */
ARPS_API arps_status arps_simulate(const arps_config* cfg, arps_runs** out);
ARPS_API size_t arps_runs_count(const arps_runs* runs);
ARPS_API arps_status arps_runs_info(const arps_runs* runs, size_t i, arps_run_info* out);
ARPS_API const char* arps_runs_label(const arps_runs* runs, size_t i);
ARPS_API const char* arps_runs_message(const arps_runs* runs, size_t i);
/* Mean recorded gain over [t0, t1]; ARPS_ERR_DOMAIN when no sample falls in it. */
ARPS_API arps_status arps_runs_mean_lambda(const arps_runs* runs, size_t i, double t0, double t1,
                                           double* out);
ARPS_API arps_status arps_runs_write_csv(const arps_runs* runs, size_t i, const char* path);
ARPS_API arps_status arps_runs_write_envelope_csv(const arps_runs* runs, size_t i,
                                                  const char* path);
/* kind: "norm", "gain" or "input"; all runs share one plot. */
ARPS_API arps_status arps_runs_write_svg(const arps_runs* runs, const char* kind, const char* path);
ARPS_API void arps_runs_destroy(arps_runs* runs);

/* Reaching-time sweeps ------------------------------------------------------ */

typedef struct arps_sweep_entry {
    double rho;
    int n;
    double b;
    int reached;
    double t_bar;
    arps_sweep_status status;
} arps_sweep_entry;

ARPS_API arps_status arps_sweep_run(const arps_config* cfg, arps_sweep** out);
ARPS_API size_t arps_sweep_count(const arps_sweep* sweep);
ARPS_API arps_status arps_sweep_entry_get(const arps_sweep* sweep, size_t i, arps_sweep_entry* out);
ARPS_API const char* arps_sweep_message(const arps_sweep* sweep, size_t i);
ARPS_API int arps_sweep_all_reached(const arps_sweep* sweep);
ARPS_API arps_status arps_sweep_write_csv(const arps_sweep* sweep, const char* path);
ARPS_API arps_status arps_sweep_write_svg(const arps_sweep* sweep, const char* path);
ARPS_API void arps_sweep_destroy(arps_sweep* sweep);

/* Assumption checks and the time-scale oracle ------------------------------- */

typedef struct arps_assumption_report {
    int rank_ok;
    double q_est;
    double q1_est;
    double d_est;
    double b0;
    double beta_star;
    size_t grid_size;
    size_t singular_points;
    int passed;
} arps_assumption_report;

ARPS_API arps_status arps_check_assumptions(const arps_config* cfg, arps_assumption_report* out);

typedef struct arps_oracle_report {
    double deviation;
    double deviation_half_step;
    double tolerance;
    double max_V;
    double max_forward_diff;
    double beta_star;
    double b0;
    size_t scaled_samples;
    int equivalence_ok;
    int halving_ok;
    int lyapunov_ok;
} arps_oracle_report;

/* scaled_csv_path may be NULL. */
ARPS_API arps_status arps_run_oracle(const arps_config* cfg, const char* scaled_csv_path,
                                     arps_oracle_report* out);

/* Run manifest -------------------------------------------------------------- */

ARPS_API arps_status arps_write_manifest(const arps_config* cfg, const char* path,
                                         const char* command, const char* config_path,
                                         const char* output_dir, const char* const* overrides,
                                         size_t n_overrides, const char* const* outputs,
                                         size_t n_outputs);

#ifdef __cplusplus
}
#endif

#endif /* ARPS_H */
