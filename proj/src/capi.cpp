// Copyright 2026 The rotcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rotcool.h"

#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "rotcool/analysis.hpp"
#include "rotcool/config.hpp"
#include "rotcool/error.hpp"
#include "rotcool/io.hpp"
#include "rotcool/sweep.hpp"

struct rc_config {
  rotcool::RunConfig cfg;
};

struct rc_result {
  rotcool::BasisIndex basis;
  rotcool::SimResult result;
};

struct rc_plan {
  rotcool::SweepPlan plan;
};

struct rc_sweep {
  std::vector<rotcool::SweepRow> rows;
};

namespace {

thread_local std::string g_last_error;
std::atomic<bool> g_cancel{false};
static_assert(std::atomic<bool>::is_always_lock_free);

rc_status fail(rc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs f and maps exceptions onto status codes.
template <class F>
rc_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const rotcool::ValidationError& e) {
    return fail(RC_ERR_VALIDATION, e.what());
  } catch (const rotcool::IntegrationError& e) {
    return fail(RC_ERR_INTEGRATION, e.what());
  } catch (const rotcool::OutputError& e) {
    return fail(RC_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RC_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rc_status null_argument() { return fail(RC_ERR_ARGUMENT, "null argument"); }

rc_sweep_row to_c(const rotcool::SweepRow& r) {
  rc_sweep_row out{};
  out.axis1 = r.axis1;
  out.has_axis2 = r.axis2.has_value();
  out.axis2 = r.axis2.value_or(std::numeric_limits<double>::quiet_NaN());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.efficiency = r.ok() ? r.efficiency : nan;
  out.loss_u = r.ok() ? r.loss_u : nan;
  out.truncation_flag = r.truncation_flag;
  out.steps = r.steps;
  out.wall_time_s = r.wall_time;
  out.error = r.ok() ? nullptr : r.error.c_str();
  return out;
}

}  // namespace

extern "C" {

const char* rc_version(void) { return "1.0.0"; }

const char* rc_last_error(void) { return g_last_error.c_str(); }

void rc_string_free(char* s) { delete[] s; }

void rc_request_cancel(void) { g_cancel.store(true); }

void rc_clear_cancel(void) { g_cancel.store(false); }

rc_status rc_config_default(rc_config** out) {
  if (!out) return null_argument();
  return guarded([&] {
    *out = new rc_config{};
    return RC_OK;
  });
}

rc_status rc_config_parse(const char* text, const char* source_name, rc_config** out) {
  if (!text || !out) return null_argument();
  return guarded([&] {
    *out = new rc_config{rotcool::parse_config(text, source_name ? source_name : "<config>")};
    return RC_OK;
  });
}

rc_status rc_config_load(const char* path, rc_config** out) {
  if (!path || !out) return null_argument();
  return guarded([&] {
    *out = new rc_config{rotcool::load_config(path)};
    return RC_OK;
  });
}

rc_status rc_config_set(rc_config* cfg, const char* path, const char* value) {
  if (!cfg || !path || !value) return null_argument();
  return guarded([&] {
    rotcool::RunConfig next = cfg->cfg;
    rotcool::set_field(next, path, value);
    cfg->cfg = std::move(next);
    return RC_OK;
  });
}

rc_status rc_config_validate(const rc_config* cfg) {
  if (!cfg) return null_argument();
  return guarded([&] {
    cfg->cfg.validate();
    return RC_OK;
  });
}

rc_status rc_config_dump(const rc_config* cfg, char** out) {
  if (!cfg || !out) return null_argument();
  return guarded([&] {
    *out = copy_string(rotcool::format_config(cfg->cfg));
    return RC_OK;
  });
}

rc_status rc_config_equal(const rc_config* a, const rc_config* b, int* equal) {
  if (!a || !b || !equal) return null_argument();
  *equal = a->cfg == b->cfg;
  return RC_OK;
}

const char* rc_config_output(const rc_config* cfg) { return cfg ? cfg->cfg.output.c_str() : ""; }

void rc_config_free(rc_config* cfg) { delete cfg; }

rc_status rc_simulate(const rc_config* cfg, rc_result** out) {
  if (!cfg || !out) return null_argument();
  return guarded([&] {
    auto result = rotcool::simulate(cfg->cfg, &g_cancel);
    *out = new rc_result{rotcool::build_basis(cfg->cfg.system), std::move(result)};
    return RC_OK;
  });
}

rc_status rc_result_summary(const rc_result* r, rc_summary* out) {
  if (!r || !out) return null_argument();
  const auto& s = r->result;
  out->efficiency = s.efficiency;
  out->loss_u = s.loss_u;
  out->cycles = static_cast<int>(s.per_cycle_efficiency.size());
  out->truncation_warning = s.truncation_flag;
  out->steps = s.step_count;
  out->wall_time_s = s.wall_time;
  out->max_trace_drift = s.max_trace_drift;
  out->min_eigenvalue = s.min_eigenvalue;
  return RC_OK;
}

rc_status rc_result_cycle(const rc_result* r, int cycle, double* efficiency, double* loss_u) {
  if (!r || !efficiency || !loss_u) return null_argument();
  if (cycle < 0 || static_cast<std::size_t>(cycle) >= r->result.per_cycle_efficiency.size()) {
    return fail(RC_ERR_ARGUMENT, "cycle index out of range");
  }
  *efficiency = r->result.per_cycle_efficiency[static_cast<std::size_t>(cycle)];
  *loss_u = r->result.per_cycle_loss[static_cast<std::size_t>(cycle)];
  return RC_OK;
}

rc_status rc_result_sample_count(const rc_result* r, size_t* count) {
  if (!r || !count) return null_argument();
  *count = r->result.samples.size();
  return RC_OK;
}

rc_status rc_result_sample(const rc_result* r, size_t i, double* time, double* populations) {
  if (!r || !time || !populations) return null_argument();
  if (i >= r->result.samples.size()) return fail(RC_ERR_ARGUMENT, "sample index out of range");
  const auto& s = r->result.samples[i];
  *time = s.time;
  std::copy(s.populations.begin(), s.populations.end(), populations);
  return RC_OK;
}

rc_status rc_result_dimension(const rc_result* r, int* dimension) {
  if (!r || !dimension) return null_argument();
  *dimension = r->basis.dimension();
  return RC_OK;
}

rc_status rc_result_write_trajectory(const rc_result* r, const char* path) {
  if (!r || !path) return null_argument();
  return guarded([&] {
    rotcool::write_file_atomic(path, rotcool::trajectory_csv(r->basis, r->result));
    return RC_OK;
  });
}

rc_status rc_result_write_summary(const rc_result* r, const char* path) {
  if (!r || !path) return null_argument();
  return guarded([&] {
    rotcool::write_file_atomic(path, rotcool::summary_json(r->result));
    return RC_OK;
  });
}

void rc_result_free(rc_result* r) { delete r; }

rc_status rc_plan_parse(const char* text, const char* source_name, rc_plan** out) {
  if (!text || !out) return null_argument();
  return guarded([&] {
    *out = new rc_plan{rotcool::parse_plan(text, source_name ? source_name : "<plan>")};
    return RC_OK;
  });
}

rc_status rc_plan_load(const char* path, rc_plan** out) {
  if (!path || !out) return null_argument();
  return guarded([&] {
    *out = new rc_plan{rotcool::load_plan(path)};
    return RC_OK;
  });
}

rc_status rc_plan_dump(const rc_plan* plan, char** out) {
  if (!plan || !out) return null_argument();
  return guarded([&] {
    *out = copy_string(rotcool::format_plan(plan->plan));
    return RC_OK;
  });
}

rc_status rc_plan_size(const rc_plan* plan, size_t* size) {
  if (!plan || !size) return null_argument();
  *size = plan->plan.size();
  return RC_OK;
}

const char* rc_plan_output(const rc_plan* plan) { return plan ? plan->plan.base.output.c_str() : ""; }

void rc_plan_free(rc_plan* plan) { delete plan; }

rc_status rc_sweep_run(const rc_plan* plan, unsigned workers, rc_progress_fn progress, void* user, rc_sweep** out) {
  if (!plan || !out) return null_argument();
  return guarded([&] {
    rotcool::SweepProgress report;
    if (progress) {
      report = [&](std::size_t index, const rotcool::SweepRow& row) {
        const rc_sweep_row c = to_c(row);
        progress(index, &c, user);
      };
    }
    auto rows = rotcool::run_sweep(plan->plan, workers, &g_cancel, report);
    std::size_t failed = 0;
    std::string first_error;
    for (const auto& r : rows) {
      if (!r.ok() && failed++ == 0) first_error = r.error;
    }
    *out = new rc_sweep{std::move(rows)};
    if (failed > 0) {
      return fail(RC_ERR_INTEGRATION, std::to_string(failed) + " grid point(s) failed; first: " + first_error);
    }
    return RC_OK;
  });
}

rc_status rc_sweep_row_count(const rc_sweep* s, size_t* count) {
  if (!s || !count) return null_argument();
  *count = s->rows.size();
  return RC_OK;
}

rc_status rc_sweep_get_row(const rc_sweep* s, size_t i, rc_sweep_row* out) {
  if (!s || !out) return null_argument();
  if (i >= s->rows.size()) return fail(RC_ERR_ARGUMENT, "row index out of range");
  *out = to_c(s->rows[i]);
  return RC_OK;
}

rc_status rc_sweep_write_csv(const rc_sweep* s, const char* path) {
  if (!s || !path) return null_argument();
  return guarded([&] {
    rotcool::write_file_atomic(path, rotcool::sweep_csv(s->rows));
    return RC_OK;
  });
}

void rc_sweep_free(rc_sweep* s) { delete s; }

rc_status rc_lz_prediction(double eta, double omega0, double delta_p, double alpha, double p_init, double* lambda,
                           double* fraction, double* transferred) {
  if (!lambda || !fraction || !transferred) return null_argument();
  return guarded([&] {
    const auto lz = rotcool::lz_prediction(eta, omega0, delta_p, alpha, p_init);
    *lambda = lz.lambda;
    *fraction = lz.fraction;
    *transferred = lz.transferred;
    return RC_OK;
  });
}

rc_status rc_scrap_margin(double omega0, double width, double tau, double delta_p, double* margin) {
  if (!margin) return null_argument();
  return guarded([&] {
    *margin = rotcool::scrap_margin(omega0, width, tau, delta_p);
    return RC_OK;
  });
}

rc_status rc_thermal_populations(int j_max, double beta_b, double* populations, size_t count) {
  if (!populations) return null_argument();
  return guarded([&] {
    const auto p = rotcool::thermal_populations(j_max, beta_b);
    if (count < p.size()) return fail(RC_ERR_ARGUMENT, "output buffer holds fewer than j_max + 1 values");
    std::copy(p.begin(), p.end(), populations);
    return RC_OK;
  });
}

rc_status rc_chain_estimate(double epsilon_step, const double* populations, size_t count, double* total) {
  if (!populations || !total) return null_argument();
  return guarded([&] {
    *total = rotcool::chain_estimate(epsilon_step, {populations, count});
    return RC_OK;
  });
}

rc_status rc_populated_levels(double kt_over_b, double p_cut, double* estimate, int* levels) {
  if (!estimate || !levels) return null_argument();
  return guarded([&] {
    *estimate = rotcool::populated_levels_estimate(kt_over_b, p_cut);
    *levels = rotcool::populated_levels(kt_over_b, p_cut);
    return RC_OK;
  });
}

}  // extern "C"
