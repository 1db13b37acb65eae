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

// rotcool command-line tool.
//
// Exit codes: 0 success, 1 I/O or internal failure, 2 invalid input,
// 3 integration aborted or interrupted.

#include <cmath>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotcool.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitAborted = 3;

int exit_code(rc_status s) {
  switch (s) {
    case RC_OK: return kExitOk;
    case RC_ERR_ARGUMENT:
    case RC_ERR_VALIDATION: return kExitInvalid;
    case RC_ERR_INTEGRATION: return kExitAborted;
    default: return kExitFailure;
  }
}

int report(rc_status s) {
  std::cerr << "rotcool: " << rc_last_error() << "\n";
  return exit_code(s);
}

extern "C" void on_signal(int) { rc_request_cancel(); }

void install_signal_handlers() {
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
}

// Resolves the output directory: the flag wins over the file's [run] output.
std::optional<fs::path> output_dir(const std::string& flag, const char* from_file) {
  if (!flag.empty()) return fs::path(flag);
  if (from_file && *from_file) return fs::path(from_file);
  return std::nullopt;
}

bool make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "rotcool: cannot create '" << dir.string() << "': " << ec.message() << "\n";
    return false;
  }
  return true;
}

std::string take_string(char* s) {
  std::string out(s);
  rc_string_free(s);
  return out;
}

int dump_default_config() {
  rc_config* cfg = nullptr;
  if (auto s = rc_config_default(&cfg); s != RC_OK) return report(s);
  char* text = nullptr;
  const auto s = rc_config_dump(cfg, &text);
  rc_config_free(cfg);
  if (s != RC_OK) return report(s);
  std::cout << take_string(text);
  return kExitOk;
}

struct SimulateArgs {
  std::string config;
  std::string out;
  bool dump = false;
};

int cmd_simulate(const SimulateArgs& args) {
  rc_config* cfg = nullptr;
  if (auto s = rc_config_load(args.config.c_str(), &cfg); s != RC_OK) return report(s);
  std::unique_ptr<rc_config, decltype(&rc_config_free)> guard(cfg, rc_config_free);

  if (args.dump) {
    char* text = nullptr;
    if (auto s = rc_config_dump(cfg, &text); s != RC_OK) return report(s);
    std::cout << take_string(text);
    return kExitOk;
  }

  const auto dir = output_dir(args.out, rc_config_output(cfg));
  if (!dir) {
    std::cerr << "rotcool: no output directory (use --out or [run] output)\n";
    return kExitInvalid;
  }

  install_signal_handlers();
  rc_result* result = nullptr;
  if (auto s = rc_simulate(cfg, &result); s != RC_OK) return report(s);
  std::unique_ptr<rc_result, decltype(&rc_result_free)> result_guard(result, rc_result_free);

  if (!make_dir(*dir)) return kExitFailure;
  if (auto s = rc_result_write_trajectory(result, (*dir / "trajectory.csv").c_str()); s != RC_OK) return report(s);
  if (auto s = rc_result_write_summary(result, (*dir / "summary.json").c_str()); s != RC_OK) return report(s);

  rc_summary sum{};
  rc_result_summary(result, &sum);
  std::printf("efficiency %.6f  loss_u %.6f  cycles %d  steps %ld  wall %.1f s%s\n", sum.efficiency, sum.loss_u,
              sum.cycles, sum.steps, sum.wall_time_s, sum.truncation_warning ? "  [truncation warning]" : "");
  return kExitOk;
}

struct SweepArgs {
  std::string plan;
  std::string out;
  std::optional<unsigned> workers;
  bool dump = false;
};

std::optional<unsigned> workers_from_env() {
  const char* env = std::getenv("ROTCOOL_WORKERS");
  if (!env || !*env) return 0u;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 0 || n > 4096) return std::nullopt;
  return static_cast<unsigned>(n);
}

void print_progress(size_t index, const rc_sweep_row* row, void* user) {
  auto* done = static_cast<size_t*>(user);
  ++done[0];
  std::fprintf(stderr, "[%zu/%zu] point %zu: ", done[0], done[1], index);
  if (row->error) {
    std::fprintf(stderr, "error: %s\n", row->error);
  } else {
    std::fprintf(stderr, "efficiency %.6f  loss %.6f  (%.1f s)\n", row->efficiency, row->loss_u, row->wall_time_s);
  }
}

int cmd_sweep(const SweepArgs& args) {
  rc_plan* plan = nullptr;
  if (auto s = rc_plan_load(args.plan.c_str(), &plan); s != RC_OK) return report(s);
  std::unique_ptr<rc_plan, decltype(&rc_plan_free)> guard(plan, rc_plan_free);

  if (args.dump) {
    char* text = nullptr;
    if (auto s = rc_plan_dump(plan, &text); s != RC_OK) return report(s);
    std::cout << take_string(text);
    return kExitOk;
  }

  const auto dir = output_dir(args.out, rc_plan_output(plan));
  if (!dir) {
    std::cerr << "rotcool: no output directory (use --out or [run] output)\n";
    return kExitInvalid;
  }
  auto workers = args.workers;
  if (!workers) {
    workers = workers_from_env();
    if (!workers) {
      std::cerr << "rotcool: ROTCOOL_WORKERS must be a non-negative integer\n";
      return kExitInvalid;
    }
  }

  install_signal_handlers();
  size_t counters[2] = {0, 0};
  rc_plan_size(plan, &counters[1]);
  rc_sweep* sweep = nullptr;
  const auto status = rc_sweep_run(plan, *workers, print_progress, counters, &sweep);
  if (!sweep) return report(status);
  std::unique_ptr<rc_sweep, decltype(&rc_sweep_free)> sweep_guard(sweep, rc_sweep_free);
  const std::string failure = rc_last_error();

  // Failed points still get their rows.
  if (!make_dir(*dir)) return kExitFailure;
  if (auto s = rc_sweep_write_csv(sweep, (*dir / "sweep.csv").c_str()); s != RC_OK) return report(s);
  if (status != RC_OK) {
    std::cerr << "rotcool: " << failure << "\n";
    return exit_code(status);
  }
  return kExitOk;
}

struct OracleArgs {
  double eta = 0.1;
  double omega0 = 5.0;
  double delta_p = 100.0;
  double alpha = 4.69e-5;
  double p_init = 1.0;
  double width = 800.0;
  std::optional<double> tau;
};

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_oracle(const OracleArgs& a) {
  double lambda = 0, fraction = 0, transferred = 0;
  if (auto s = rc_lz_prediction(a.eta, a.omega0, a.delta_p, a.alpha, a.p_init, &lambda, &fraction, &transferred);
      s != RC_OK) {
    return report(s);
  }
  json out = {{"lambda", lambda}, {"fraction", fraction}, {"transferred", transferred}};
  if (a.tau) {
    double margin = 0;
    if (auto s = rc_scrap_margin(a.omega0, a.width, *a.tau, a.delta_p, &margin); s != RC_OK) return report(s);
    out["scrap_margin"] = number_or_null(margin);
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct EstimateArgs {
  std::optional<double> epsilon;
  std::vector<double> populations;
  int j_max = 5;
  double beta_b = 0.15;
  std::optional<double> kt_over_b;
  double p_cut = 0.005;
};

int cmd_estimate(const EstimateArgs& a) {
  if (!a.epsilon && !a.kt_over_b) {
    std::cerr << "rotcool: estimate needs --epsilon or --kt-over-b\n";
    return kExitInvalid;
  }
  json out = json::object();
  if (a.epsilon) {
    std::vector<double> p = a.populations;
    if (p.empty()) {
      if (a.j_max < 0) {
        std::cerr << "rotcool: --j-max must be >= 0\n";
        return kExitInvalid;
      }
      p.resize(static_cast<size_t>(a.j_max) + 1);
      if (auto s = rc_thermal_populations(a.j_max, a.beta_b, p.data(), p.size()); s != RC_OK) return report(s);
    }
    double total = 0;
    if (auto s = rc_chain_estimate(*a.epsilon, p.data(), p.size(), &total); s != RC_OK) return report(s);
    out["epsilon_step"] = *a.epsilon;
    out["populations"] = p;
    out["total"] = total;
  }
  if (a.kt_over_b) {
    double estimate = 0;
    int levels = 0;
    if (auto s = rc_populated_levels(*a.kt_over_b, a.p_cut, &estimate, &levels); s != RC_OK) return report(s);
    out["populated_levels"] = levels;
    out["populated_levels_estimate"] = estimate;
  }
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotational cooling of a trapped molecular ion by adiabatic passage.\n"
               "Frequencies are in units of the trap frequency nu, times in 1/nu."};
  app.require_subcommand(0, 1);
  bool dump_defaults = false;
  app.add_flag("--dump-config", dump_defaults, "Print the default configuration and exit");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate one configuration");
  simulate->add_option("--config", sim.config, "Configuration file")->required();
  simulate->add_option("--out", sim.out, "Output directory (trajectory.csv, summary.json)");
  simulate->add_flag("--dump-config", sim.dump, "Print the parsed configuration in canonical form and exit");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("--plan", sw.plan, "Plan file")->required();
  sweep->add_option("--out", sw.out, "Output directory (sweep.csv)");
  sweep->add_option("--workers", sw.workers, "Worker threads; 0 uses every core (default: $ROTCOOL_WORKERS or 0)");
  sweep->add_flag("--dump-config", sw.dump, "Print the parsed plan in canonical form and exit");

  OracleArgs orc;
  auto* oracle = app.add_subcommand("oracle", "Landau-Zener prediction and SCRAP adiabaticity margin");
  oracle->add_option("--eta", orc.eta, "Lamb-Dicke parameter")->capture_default_str();
  oracle->add_option("--omega0", orc.omega0, "Peak Rabi frequency")->capture_default_str();
  oracle->add_option("--delta-p", orc.delta_p, "Pump detuning")->capture_default_str();
  oracle->add_option("--alpha", orc.alpha, "Chirp rate")->capture_default_str();
  oracle->add_option("--p-init", orc.p_init, "Initial population of the upper level")->capture_default_str();
  oracle->add_option("--T", orc.width, "Pulse width, for the SCRAP margin")->capture_default_str();
  oracle->add_option("--tau", orc.tau, "Pulse half delay; adds the SCRAP margin to the output");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Multilevel transfer and populated-level estimates");
  estimate->add_option("--epsilon", est.epsilon, "Single-step transfer efficiency");
  estimate->add_option("--populations", est.populations, "Initial rotational populations P(J)")->delimiter(',');
  estimate->add_option("--j-max", est.j_max, "Highest level of the thermal default")->capture_default_str();
  estimate->add_option("--beta-b", est.beta_b, "beta*B of the thermal default")->capture_default_str();
  estimate->add_option("--kt-over-b", est.kt_over_b, "kT/B for the populated-level count");
  estimate->add_option("--p-cut", est.p_cut, "Population cutoff for the level count")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*sweep) return cmd_sweep(sw);
    if (*oracle) return cmd_oracle(orc);
    if (*estimate) return cmd_estimate(est);
    if (dump_defaults) return dump_default_config();
  } catch (const std::exception& e) {
    std::cerr << "rotcool: " << e.what() << "\n";
    return kExitFailure;
  }
  std::cout << app.help();
  return kExitInvalid;
}
