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

#include "rotcool/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotcool/error.hpp"

namespace rotcool {

namespace {

// Beyond this many widths from every centre the envelopes are below 2e-11 of peak.
constexpr double kWindowWidths = 5.0;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

double envelope_at(const PulseEnvelope& env, double t) {
  const double x = (t - env.center) / env.width;
  return env.omega0 * std::exp(-x * x);
}

double detuning_at(const DetuningProgram& prog, double t) {
  if (prog.kind == DetuningProgram::Kind::constant) return prog.base;
  return prog.base - prog.alpha * (t - prog.reference);
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::stirap: return "stirap";
    case Scheme::scrap: return "scrap";
    case Scheme::carp: return "carp";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "stirap") return Scheme::stirap;
  if (name == "scrap") return Scheme::scrap;
  if (name == "carp") return Scheme::carp;
  throw ValidationError("unknown scheme '" + std::string(name) + "' (expected stirap, scrap or carp)");
}

PulseSchedule::PulseSchedule(Scheme scheme, std::vector<PulseStep> steps)
    : scheme_(scheme), steps_(std::move(steps)) {
  if (steps_.empty()) throw ValidationError("a pulse schedule needs at least one step");
  std::stable_sort(steps_.begin(), steps_.end(), [](const PulseStep& a, const PulseStep& b) {
    return a.pump.envelope.center < b.pump.envelope.center;
  });

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& step : steps_) {
    for (const Pulse* p : {&step.pump, &step.stokes}) {
      const auto& env = p->envelope;
      if (!(env.width > 0.0) || !finite(env.width)) throw ValidationError("pulse width must be > 0");
      if (!(env.omega0 >= 0.0) || !finite(env.omega0)) throw ValidationError("Rabi frequency must be >= 0");
      if (!finite(env.center)) throw ValidationError("pulse centre must be finite");
      if (!finite(p->detuning.base) || !finite(p->detuning.alpha) || !finite(p->detuning.reference)) {
        throw ValidationError("detuning program must be finite");
      }
      lo = std::min(lo, env.center - kWindowWidths * env.width);
      hi = std::max(hi, env.center + kWindowWidths * env.width);
      max_width_ = std::max(max_width_, env.width);
    }
  }
  t_start_ = lo;
  t_end_ = hi;

  for (std::size_t i = 1; i < steps_.size(); ++i) {
    const double mid = 0.5 * (steps_[i - 1].pair_center() + steps_[i].pair_center());
    if (mid > t_start_ && mid < t_end_) switch_times_.push_back(mid);
  }
  std::sort(switch_times_.begin(), switch_times_.end());
}

std::size_t PulseSchedule::active_step(double t) const {
  std::size_t best = 0;
  double best_dist = std::abs(t - steps_[0].pair_center());
  for (std::size_t i = 1; i < steps_.size(); ++i) {
    const double dist = std::abs(t - steps_[i].pair_center());
    if (dist <= best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  return best;
}

PulseSchedule make_schedule(Scheme scheme, const SystemSpec& spec, const PulseParams& params) {
  spec.validate();
  const double width = params.width;
  const double tau = params.tau;
  const double tau_tilde = params.resolved_tau_tilde();
  const double delta_p = params.delta_p;
  const double delta_s = params.resolved_delta_s();

  if (!(width > 0.0) || !finite(width)) throw ValidationError("pulse width T must be > 0");
  if (!(tau_tilde > 0.0) || !finite(tau_tilde)) throw ValidationError("tau_tilde must be > 0");
  if (!finite(tau) || !finite(delta_p) || !finite(delta_s) || !finite(params.alpha)) {
    throw ValidationError("pulse parameters must be finite");
  }
  if (!(params.omega0_p >= 0.0) || !(params.omega0_s >= 0.0)) {
    throw ValidationError("Rabi frequencies must be >= 0");
  }
  switch (scheme) {
    case Scheme::stirap:
    case Scheme::scrap:
      if (!(tau > 0.0)) throw ValidationError(std::string(to_string(scheme)) + " needs tau > 0");
      break;
    case Scheme::carp:
      if (tau != 0.0) throw ValidationError("carp uses simultaneous pulses: tau must be 0");
      break;
  }

  std::vector<PulseStep> steps;
  for (const auto& link : spec.resolved_chain()) {
    PulseStep step;
    step.levels = link;
    step.order = spec.j_max - link.upper_j;
    const double offset = step.order * tau_tilde;
    step.pump.envelope = {params.omega0_p, 3.0 * tau + offset, width};
    step.stokes.envelope = {params.omega0_s, tau + offset, width};
    step.pump.detuning = DetuningProgram::constant(delta_p);
    if (scheme == Scheme::carp) {
      step.stokes.detuning = DetuningProgram::chirp(delta_s, params.alpha, step.pair_center());
    } else {
      step.stokes.detuning = DetuningProgram::constant(delta_s);
    }
    steps.push_back(step);
  }
  return PulseSchedule(scheme, std::move(steps));
}

}  // namespace rotcool
