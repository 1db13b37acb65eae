/* Copyright 2026 The rotcool Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the rotcool simulator.
 *
 * Every function returns an rc_status. On failure a description is kept per
 * thread and can be read with rc_last_error(). Handles are opaque and owned
 * by the caller, who releases them with the matching *_free function.
 */

#ifndef ROTCOOL_H_
#define ROTCOOL_H_

#include <stddef.h>

#if defined(_WIN32)
#define RC_API __declspec(dllexport)
#else
#define RC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_ERR_ARGUMENT = 1,    /* null pointer or index out of range */
  RC_ERR_VALIDATION = 2,  /* bad parameters or malformed configuration */
  RC_ERR_INTEGRATION = 3, /* a run aborted or was interrupted */
  RC_ERR_IO = 4,
  RC_ERR_INTERNAL = 5
} rc_status;

typedef struct rc_config rc_config;
typedef struct rc_result rc_result;
typedef struct rc_plan rc_plan;
typedef struct rc_sweep rc_sweep;

RC_API const char* rc_version(void);
/* Message of the last failed call on this thread, "" if none. */
RC_API const char* rc_last_error(void);
RC_API void rc_string_free(char* s);

/* Cancellation shared by every running simulation and sweep. Only sets an
 * atomic flag, so it may be called from a signal handler. */
RC_API void rc_request_cancel(void);
RC_API void rc_clear_cancel(void);

/* ---- configuration ---- */
RC_API rc_status rc_config_default(rc_config** out);
RC_API rc_status rc_config_parse(const char* text, const char* source_name, rc_config** out);
RC_API rc_status rc_config_load(const char* path, rc_config** out);
/* Sets "section.key" from its textual value, e.g. ("pulses.alpha", "4.69e-5"). */
RC_API rc_status rc_config_set(rc_config* cfg, const char* path, const char* value);
RC_API rc_status rc_config_validate(const rc_config* cfg);
/* Canonical text; release with rc_string_free. */
RC_API rc_status rc_config_dump(const rc_config* cfg, char** out);
RC_API rc_status rc_config_equal(const rc_config* a, const rc_config* b, int* equal);
/* Output directory named in the file, "" when absent. */
RC_API const char* rc_config_output(const rc_config* cfg);
RC_API void rc_config_free(rc_config* cfg);

/* ---- single runs ---- */
typedef struct rc_summary {
  double efficiency;
  double loss_u;
  int cycles;
  int truncation_warning;
  long steps;
  double wall_time_s;
  double max_trace_drift;
  double min_eigenvalue;
} rc_summary;

RC_API rc_status rc_simulate(const rc_config* cfg, rc_result** out);
RC_API rc_status rc_result_summary(const rc_result* r, rc_summary* out);
RC_API rc_status rc_result_cycle(const rc_result* r, int cycle, double* efficiency, double* loss_u);
RC_API rc_status rc_result_sample_count(const rc_result* r, size_t* count);
/* Populations of sample i, indexed by flat basis index; `populations` must
 * hold rc_result_dimension() values. */
RC_API rc_status rc_result_sample(const rc_result* r, size_t i, double* time, double* populations);
RC_API rc_status rc_result_dimension(const rc_result* r, int* dimension);
RC_API rc_status rc_result_write_trajectory(const rc_result* r, const char* path);
RC_API rc_status rc_result_write_summary(const rc_result* r, const char* path);
RC_API void rc_result_free(rc_result* r);

/* ---- sweeps ---- */
typedef struct rc_sweep_row {
  double axis1;
  double axis2; /* NaN without a second axis */
  int has_axis2;
  double efficiency; /* NaN when the run failed */
  double loss_u;
  int truncation_flag;
  long steps;
  double wall_time_s;
  const char* error; /* NULL for a completed run; valid while the sweep lives */
} rc_sweep_row;

typedef void (*rc_progress_fn)(size_t index, const rc_sweep_row* row, void* user);

RC_API rc_status rc_plan_parse(const char* text, const char* source_name, rc_plan** out);
RC_API rc_status rc_plan_load(const char* path, rc_plan** out);
RC_API rc_status rc_plan_dump(const rc_plan* plan, char** out);
RC_API rc_status rc_plan_size(const rc_plan* plan, size_t* size);
RC_API const char* rc_plan_output(const rc_plan* plan);
RC_API void rc_plan_free(rc_plan* plan);

/* Runs the grid with `workers` threads (0: every core). Returns
 * RC_ERR_INTEGRATION, with *out still set, when any row failed. */
RC_API rc_status rc_sweep_run(const rc_plan* plan, unsigned workers, rc_progress_fn progress, void* user,
                              rc_sweep** out);
RC_API rc_status rc_sweep_row_count(const rc_sweep* s, size_t* count);
RC_API rc_status rc_sweep_get_row(const rc_sweep* s, size_t i, rc_sweep_row* out);
RC_API rc_status rc_sweep_write_csv(const rc_sweep* s, const char* path);
RC_API void rc_sweep_free(rc_sweep* s);

/* ---- closed-form estimates ---- */
RC_API rc_status rc_lz_prediction(double eta, double omega0, double delta_p, double alpha, double p_init,
                                  double* lambda, double* fraction, double* transferred);
RC_API rc_status rc_scrap_margin(double omega0, double width, double tau, double delta_p, double* margin);
RC_API rc_status rc_thermal_populations(int j_max, double beta_b, double* populations, size_t count);
RC_API rc_status rc_chain_estimate(double epsilon_step, const double* populations, size_t count, double* total);
RC_API rc_status rc_populated_levels(double kt_over_b, double p_cut, double* estimate, int* levels);

#ifdef __cplusplus
}
#endif

#endif /* ROTCOOL_H_ */
