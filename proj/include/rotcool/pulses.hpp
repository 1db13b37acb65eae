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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rotcool/basis.hpp"

namespace rotcool {

/// Gaussian Rabi-frequency envelope omega0 * exp(-(t - center)^2 / width^2).
struct PulseEnvelope {
  double omega0 = 0.0;
  double center = 0.0;
  double width = 1.0;

  friend bool operator==(const PulseEnvelope&, const PulseEnvelope&) = default;
};

double envelope_at(const PulseEnvelope& env, double t);

struct DetuningProgram {
  enum class Kind { constant, chirp };

  Kind kind = Kind::constant;
  double base = 0.0;
  double alpha = 0.0;      // chirp rate, ignored for constant programs
  double reference = 0.0;  // time at which a chirp equals `base`

  static DetuningProgram constant(double base) { return {Kind::constant, base, 0.0, 0.0}; }
  static DetuningProgram chirp(double base, double alpha, double reference) {
    return {Kind::chirp, base, alpha, reference};
  }

  friend bool operator==(const DetuningProgram&, const DetuningProgram&) = default;
};

/// constant: base; chirp: base - alpha * (t - reference).
double detuning_at(const DetuningProgram& prog, double t);

struct Pulse {
  PulseEnvelope envelope;
  DetuningProgram detuning;

  friend bool operator==(const Pulse&, const Pulse&) = default;
};

struct PulseStep {
  ChainStep levels;
  int order = 0;  // J_max - upper_J; the pair is centred at 2*tau + order*tau_tilde
  Pulse pump;     // drives |upper> <-> |e>
  Pulse stokes;   // drives |lower> <-> |e>

  /// Midpoint of the pump and Stokes centres.
  double pair_center() const { return 0.5 * (pump.envelope.center + stokes.envelope.center); }

  friend bool operator==(const PulseStep&, const PulseStep&) = default;
};

enum class Scheme { stirap, scrap, carp };

std::string_view to_string(Scheme scheme);
/// Throws ValidationError on an unknown name.
Scheme parse_scheme(std::string_view name);

/// Scalar pulse parameters shared by every step of a schedule.
struct PulseParams {
  double omega0_p = 5.0;
  double omega0_s = 5.0;
  double width = 800.0;                 // T
  double tau = 0.0;                     // pump/Stokes half delay
  std::optional<double> tau_tilde;      // step spacing; defaults to 6 T
  double delta_p = 100.0;
  std::optional<double> delta_s;        // defaults to delta_p
  double alpha = 0.0;                   // Stokes chirp rate (carp only)

  double resolved_tau_tilde() const { return tau_tilde.value_or(6.0 * width); }
  double resolved_delta_s() const { return delta_s.value_or(delta_p); }

  friend bool operator==(const PulseParams&, const PulseParams&) = default;
};

/// Full time-dependent control program. Steps are ordered by pump centre.
class PulseSchedule {
 public:
  PulseSchedule(Scheme scheme, std::vector<PulseStep> steps);

  Scheme scheme() const noexcept { return scheme_; }
  const std::vector<PulseStep>& steps() const noexcept { return steps_; }
  double t_start() const noexcept { return t_start_; }
  double t_end() const noexcept { return t_end_; }
  /// Largest pulse width in the schedule.
  double max_width() const noexcept { return max_width_; }

  /// Index of the step whose pair centre is nearest to t; ties go to the later step.
  std::size_t active_step(double t) const;
  /// Times at which the active step changes, strictly inside the window.
  const std::vector<double>& switch_times() const noexcept { return switch_times_; }

 private:
  Scheme scheme_;
  std::vector<PulseStep> steps_;
  std::vector<double> switch_times_;
  double t_start_ = 0.0;
  double t_end_ = 0.0;
  double max_width_ = 0.0;
};

/// Builds one step per chain entry with pump centre 3*tau + k*tau_tilde and
/// Stokes centre tau + k*tau_tilde, k = J_max - upper_J.
///   stirap, scrap: tau > 0, constant detunings delta_p and delta_s.
///   carp: tau = 0, constant pump, Stokes chirped about each pair centre.
PulseSchedule make_schedule(Scheme scheme, const SystemSpec& spec, const PulseParams& params);

}  // namespace rotcool
