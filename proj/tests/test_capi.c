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

/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <unistd.h>

#include "rotcool.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

static const char* kConfig =
    "[run]\n"
    "scheme = carp\n"
    "[system]\n"
    "j_max = 1\n"
    "n_max = 3\n"
    "[pulses]\n"
    "omega0 = 2\n"
    "T = 40\n"
    "delta_p = 10\n"
    "alpha = 2e-3\n"
    "[integrator]\n"
    "sample_interval = 10\n"
    "[initial]\n"
    "state = lambda_mixture\n"
    "p_ground = 0\n"
    "p_excited = 1\n";

static void test_config(void) {
  rc_config* def = NULL;
  rc_config* cfg = NULL;
  rc_config* back = NULL;
  char* text = NULL;
  int equal = 0;

  EXPECT(strlen(rc_version()) > 0);
  EXPECT(rc_config_default(&def) == RC_OK);
  EXPECT(rc_config_parse(kConfig, "c.ini", &cfg) == RC_OK);
  EXPECT(rc_config_equal(def, cfg, &equal) == RC_OK && !equal);
  EXPECT(rc_config_dump(cfg, &text) == RC_OK);
  EXPECT(rc_config_parse(text, "dump", &back) == RC_OK);
  EXPECT(rc_config_equal(back, cfg, &equal) == RC_OK && equal);
  rc_string_free(text);
  EXPECT(strcmp(rc_config_output(cfg), "") == 0);

  EXPECT(rc_config_set(back, "pulses.alpha", "3e-3") == RC_OK);
  EXPECT(rc_config_equal(back, cfg, &equal) == RC_OK && !equal);
  EXPECT(rc_config_set(back, "pulses.nope", "1") == RC_ERR_VALIDATION);
  EXPECT(strstr(rc_last_error(), "nope") != NULL);
  EXPECT(rc_config_set(back, "pulses.T", "-1") == RC_ERR_VALIDATION);

  rc_config* bad = NULL;
  EXPECT(rc_config_parse("[pulses]\nT = -5\n", "bad.ini", &bad) == RC_ERR_VALIDATION);
  EXPECT(bad == NULL);
  EXPECT(strncmp(rc_last_error(), "bad.ini:2:", 10) == 0);
  EXPECT(rc_config_load("/nonexistent/x.ini", &bad) == RC_ERR_VALIDATION);
  EXPECT(rc_config_parse(NULL, "x", &bad) == RC_ERR_ARGUMENT);
  EXPECT(rc_config_validate(cfg) == RC_OK);

  rc_config_free(def);
  rc_config_free(cfg);
  rc_config_free(back);
  rc_config_free(NULL);
}

static void test_simulate(void) {
  rc_config* cfg = NULL;
  rc_result* r = NULL;
  rc_summary s;
  double eff = 0, loss = 0, t = 0;
  size_t count = 0;
  int dim = 0;

  EXPECT(rc_config_parse(kConfig, "c.ini", &cfg) == RC_OK);
  EXPECT(rc_simulate(cfg, &r) == RC_OK);
  EXPECT(rc_result_summary(r, &s) == RC_OK);
  EXPECT(s.efficiency > 0.5 && s.efficiency <= 1.0);
  EXPECT(s.loss_u >= 0.0 && s.efficiency + s.loss_u <= 1.0 + 1e-9);
  EXPECT(s.cycles == 1);
  EXPECT(s.steps > 0);
  EXPECT(s.max_trace_drift < 1e-6);
  EXPECT(rc_result_cycle(r, 0, &eff, &loss) == RC_OK && eff == s.efficiency && loss == s.loss_u);
  EXPECT(rc_result_cycle(r, 1, &eff, &loss) == RC_ERR_ARGUMENT);
  EXPECT(rc_result_dimension(r, &dim) == RC_OK && dim == 16);
  EXPECT(rc_result_sample_count(r, &count) == RC_OK && count > 2);

  double* pops = malloc(sizeof(double) * (size_t)dim);
  EXPECT(rc_result_sample(r, 0, &t, pops) == RC_OK);
  EXPECT(pops[4] == 1.0); /* |1, n=0> */
  EXPECT(rc_result_sample(r, count - 1, &t, pops) == RC_OK);
  double total = 0;
  for (int i = 0; i < dim; ++i) total += pops[i];
  EXPECT(fabs(total - 1.0) < 1e-9);
  EXPECT(rc_result_sample(r, count, &t, pops) == RC_ERR_ARGUMENT);
  free(pops);

  char dir[] = "/tmp/rc_capi_XXXXXX";
  EXPECT(mkdtemp(dir) != NULL);
  char path[256];
  snprintf(path, sizeof path, "%s/summary.json", dir);
  EXPECT(rc_result_write_summary(r, path) == RC_OK);
  EXPECT(access(path, F_OK) == 0);
  remove(path);
  snprintf(path, sizeof path, "%s/trajectory.csv", dir);
  EXPECT(rc_result_write_trajectory(r, path) == RC_OK);
  remove(path);
  rmdir(dir);
  EXPECT(rc_result_write_summary(r, "/nonexistent/dir/summary.json") == RC_ERR_IO);

  rc_result* again = NULL;
  rc_summary s2;
  EXPECT(rc_simulate(cfg, &again) == RC_OK);
  EXPECT(rc_result_summary(again, &s2) == RC_OK && s2.efficiency == s.efficiency);
  rc_result_free(again);

  rc_request_cancel();
  rc_result* cancelled = NULL;
  EXPECT(rc_simulate(cfg, &cancelled) == RC_ERR_INTEGRATION);
  EXPECT(cancelled == NULL);
  rc_clear_cancel();

  rc_result_free(r);
  rc_config_free(cfg);
}

static void count_rows(size_t index, const rc_sweep_row* row, void* user) {
  (void)index;
  if (row->error == NULL) ++*(int*)user;
}

static void test_sweep(void) {
  char text[1024];
  snprintf(text, sizeof text, "%s[sweep]\naxis1 = pulses.omega0\nvalues1 = 1.5, 2\naxis2 = pulses.alpha\nvalues2 = 1e-3, 2e-3\n",
           kConfig);
  rc_plan* plan = NULL;
  rc_sweep* sweep = NULL;
  rc_sweep_row row;
  size_t n = 0;
  int done = 0;

  EXPECT(rc_plan_parse(text, "p.ini", &plan) == RC_OK);
  EXPECT(rc_plan_size(plan, &n) == RC_OK && n == 4);
  EXPECT(rc_sweep_run(plan, 1, count_rows, &done, &sweep) == RC_OK);
  EXPECT(done == 4);
  EXPECT(rc_sweep_row_count(sweep, &n) == RC_OK && n == 4);
  EXPECT(rc_sweep_get_row(sweep, 3, &row) == RC_OK);
  EXPECT(row.axis1 == 2.0 && row.has_axis2 && row.axis2 == 2e-3 && row.error == NULL);
  EXPECT(rc_sweep_get_row(sweep, 4, &row) == RC_ERR_ARGUMENT);
  rc_sweep_free(sweep);

  rc_request_cancel();
  EXPECT(rc_sweep_run(plan, 2, NULL, NULL, &sweep) == RC_ERR_INTEGRATION);
  rc_clear_cancel();
  EXPECT(sweep != NULL);
  EXPECT(rc_sweep_get_row(sweep, 0, &row) == RC_OK && row.error != NULL && isnan(row.efficiency));
  rc_sweep_free(sweep);

  rc_plan* bad = NULL;
  EXPECT(rc_plan_parse(kConfig, "p.ini", &bad) == RC_ERR_VALIDATION);
  rc_plan_free(plan);
}

static void test_estimates(void) {
  double lambda = 0, fraction = 0, transferred = 0, margin = 0, total = 0, est = 0;
  double pops[6];
  int levels = 0;

  EXPECT(rc_lz_prediction(0.1, 5, 100, 4.69e-5, 1.0, &lambda, &fraction, &transferred) == RC_OK);
  EXPECT(fabs(lambda - 6.6631) < 1e-4);
  EXPECT(rc_lz_prediction(0.1, 5, 100, 0.0, 1.0, &lambda, &fraction, &transferred) == RC_ERR_VALIDATION);
  EXPECT(rc_scrap_margin(7.5, 800, 320, 100, &margin) == RC_OK && fabs(margin - 816.9) < 0.1);
  EXPECT(rc_thermal_populations(5, 0.15, pops, 6) == RC_OK && fabs(pops[0] - 0.14321) < 1e-5);
  EXPECT(rc_thermal_populations(5, 0.15, pops, 3) == RC_ERR_ARGUMENT);
  EXPECT(rc_chain_estimate(1.0, pops, 6, &total) == RC_OK && fabs(total - 1.0) < 1e-12);
  EXPECT(rc_chain_estimate(2.0, pops, 6, &total) == RC_ERR_VALIDATION);
  EXPECT(rc_populated_levels(50, 0.005, &est, &levels) == RC_OK && levels == 16 && fabs(est - 15.17) < 0.01);
}

int main(void) {
  test_config();
  test_simulate();
  test_sweep();
  test_estimates();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
