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

#pragma once

#include <atomic>
#include <optional>
#include <vector>

#include "rotcool/basis.hpp"
#include "rotcool/dynamics.hpp"
#include "rotcool/pulses.hpp"

namespace rotcool {

struct IntegratorConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double max_step = 0.05;
  /// Spacing of trajectory samples; defaults to T/20 of the widest pulse.
  std::optional<double> sample_interval;
  bool hermitize_every_step = true;

  void validate() const;

  friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct Sample {
  double time;
  std::vector<double> populations;  // indexed by flat basis index
};

struct SimResult {
  std::vector<Sample> samples;
  DensityState final_state;
  double efficiency = 0.0;
  double loss_u = 0.0;
  /// Total population in n = n_max at the end of the run.
  double truncation_population = 0.0;
  bool truncation_flag = false;
  long step_count = 0;
  long rejected_steps = 0;
  double wall_time = 0.0;  // seconds
  /// Largest |trace - 1| seen at any accepted step.
  double max_trace_drift = 0.0;
  /// Smallest eigenvalue over all samples; positivity is monitored, never enforced.
  double min_eigenvalue = 0.0;
  std::vector<double> per_cycle_efficiency;
  std::vector<double> per_cycle_loss;
};

/// Truncation guard threshold on the population of the top Fock level.
inline constexpr double kTruncationThreshold = 1e-3;
/// A run aborts once the trace drifts further than this from its initial value.
inline constexpr double kTraceDriftLimit = 1e-6;

/// Integrates the master equation over the schedule window with an adaptive
/// Dormand-Prince 5(4) pair. rho0 is taken as the state at t_start.
/// Throws IntegrationError on step-size underflow, trace drift or
/// cancellation, and ValidationError on invalid inputs.
SimResult run(const MasterEquation& eq, const DensityState& rho0, const IntegratorConfig& cfg,
              const std::atomic<bool>* cancel = nullptr);
SimResult run(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho0,
              const IntegratorConfig& cfg);

/// Repeats (run, motional_reset) `cycles` times. The final state is the state
/// after the last pulse sequence, before its reset. Sample times of cycle k
/// are offset by k times the window length.
SimResult run_cycles(const MasterEquation& eq, const DensityState& rho0, const IntegratorConfig& cfg,
                     int cycles, const std::atomic<bool>* cancel = nullptr);
SimResult run_cycles(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho0,
                     const IntegratorConfig& cfg, int cycles);

}  // namespace rotcool
