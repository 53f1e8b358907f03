/* scfsim — store-carry-forward cooperative transmission planner.
 *
 * C interface over the planning/replay core.  All functions are
 * synchronous; an experiment handle is not thread-safe, but distinct
 * handles are independent.  Every call that can fail returns an
 * scf_status; the failure message is kept on the handle (or in a
 * thread-local slot when no handle exists yet) and read back with
 * scf_last_error().
 */
#ifndef SCFSIM_H
#define SCFSIM_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scf_status {
  SCF_OK = 0,
  SCF_ERR_INVALID_ARGUMENT = 1,
  SCF_ERR_PARSE = 2,
  SCF_ERR_VALIDATION = 3,
  SCF_ERR_IO = 4,
  SCF_ERR_STATE_SPACE = 5, /* instance too large for exhaustive work */
  SCF_ERR_INTERNAL = 6
} scf_status;

typedef struct scf_experiment scf_experiment;

/* Load + validate a config document.  On success *out owns the experiment
 * and must be released with scf_experiment_close. */
scf_status scf_experiment_open(const char* config_path, scf_experiment** out);
void scf_experiment_close(scf_experiment* x);

/* Overrides; apply before scf_plan. */
scf_status scf_set_output_dir(scf_experiment* x, const char* dir);
scf_status scf_set_seed(scf_experiment* x, uint64_t seed); /* search seed */
scf_status scf_set_t_max(scf_experiment* x, double t_max_s);
/* Replay against a recorded trace instead of the config's perturbation. */
scf_status scf_set_replay_trace(scf_experiment* x, const char* csv_path);

/* Phases.  Each writes its report files into the output directory:
 *   plan   -> strategy_baseline.json strategy_mmtsa.json metrics.csv
 *             search_trace.csv summary.txt timing.log
 *   replay -> replay_report.json
 *   sweep  -> sweep.csv
 *   oracle -> oracle.json
 * replay/sweep/oracle require a prior successful scf_plan on the handle. */
scf_status scf_plan(scf_experiment* x);
scf_status scf_replay(scf_experiment* x, uint64_t seed);
scf_status scf_sweep(scf_experiment* x, uint64_t seed_lo, uint64_t seed_hi);
scf_status scf_oracle(scf_experiment* x);

/* Scalar results by name, available once the producing phase ran.
 * Names: q_max_mbit rate_v2i_mbps rate_v2v_mbps target_dwell_s relay_count
 *        sr_units sr_volume_mbit planned_accuracy search_temperature
 *        search_accepted warning_count
 *        baseline_{u,u_hat,theta,v2i_j,v2v_j,feasible}
 *        mmtsa_{u,u_hat,theta,v2i_j,v2v_j,feasible,ee}
 *        replay_{delivered,assigned,accuracy,v2i_j,v2v_j,completion_s,ee}
 *        oracle_{states,best_u_hat,matches} */
scf_status scf_metric(const scf_experiment* x, const char* name, double* out);

/* Number of planner warnings and access to each message. */
scf_status scf_warning(const scf_experiment* x, int index, const char** out);

const char* scf_last_error(const scf_experiment* x);
const char* scf_status_name(scf_status s);

/* Directory with the shipped configs/fixtures (SCFSIM_BUNDLE_DIR overrides
 * the build-time location). */
const char* scf_bundled_dir(void);
const char* scf_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SCFSIM_H */
