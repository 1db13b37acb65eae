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

#include "rotcool/integrate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "rotcool/analysis.hpp"
#include "rotcool/error.hpp"

namespace rotcool {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) throw ValidationError("rel_tol must be > 0");
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) throw ValidationError("abs_tol must be > 0");
  if (!(max_step > 0.0) || !std::isfinite(max_step)) throw ValidationError("max_step must be > 0");
  if (sample_interval && (!(*sample_interval > 0.0) || !std::isfinite(*sample_interval))) {
    throw ValidationError("sample_interval must be > 0");
  }
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// Step-size controller (PI, as in Hairer & Wanner's DOPRI5).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kFacMin = 0.2;   // largest shrink factor is 1/0.2
constexpr double kFacMax = 10.0;  // largest growth factor

struct Event {
  double time;
  bool sample;
  bool breakpoint;
};

std::vector<Event> build_events(const PulseSchedule& schedule, double interval) {
  const double t0 = schedule.t_start();
  const double t1 = schedule.t_end();
  std::vector<Event> events;
  const auto count = static_cast<long>(std::floor((t1 - t0) / interval));
  for (long k = 1; k <= count; ++k) {
    const double t = t0 + static_cast<double>(k) * interval;
    if (t < t1 - 1e-9 * interval) events.push_back({t, true, false});
  }
  for (double t : schedule.switch_times()) events.push_back({t, false, true});
  events.push_back({t1, true, false});
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });

  std::vector<Event> merged;
  for (const auto& ev : events) {
    if (!merged.empty() && ev.time - merged.back().time <= 1e-12 * std::max(1.0, std::abs(ev.time))) {
      merged.back().sample |= ev.sample;
      merged.back().breakpoint |= ev.breakpoint;
    } else {
      merged.push_back(ev);
    }
  }
  return merged;
}

void check_initial_state(const MasterEquation& eq, const DensityState& rho0) {
  const int d = eq.dimension();
  if (rho0.matrix.rows() != d || rho0.matrix.cols() != d) {
    throw ValidationError("initial state is " + std::to_string(rho0.matrix.rows()) + "x" +
                          std::to_string(rho0.matrix.cols()) + ", basis dimension is " +
                          std::to_string(d));
  }
  if (!rho0.matrix.allFinite()) throw ValidationError("initial state has non-finite entries");
  if (std::abs(rho0.trace() - 1.0) > 1e-8) {
    throw ValidationError("initial state trace is " + std::to_string(rho0.trace()) + ", expected 1");
  }
  if (rho0.hermiticity_defect() > 1e-10) throw ValidationError("initial state is not Hermitian");
}

class Stepper {
 public:
  Stepper(const MasterEquation& eq, const IntegratorConfig& cfg)
      : eq_(eq), layout_(eq.layout()), cfg_(cfg), d_(eq.dimension()), n_(layout_.size()) {
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &ynew_}) v->resize(n_);
  }

  SimResult integrate(const DensityState& rho0, const std::atomic<bool>* cancel) {
    const auto clock_start = std::chrono::steady_clock::now();
    const auto& schedule = eq_.schedule();
    const double interval = cfg_.sample_interval.value_or(schedule.max_width() / 20.0);
    const auto events = build_events(schedule, interval);

    SimResult result;
    std::vector<double> y(n_);
    layout_.pack(rho0.matrix, y.data());
    double t = schedule.t_start();
    const double trace0 = layout_.trace(y.data());
    result.min_eigenvalue = std::numeric_limits<double>::infinity();
    record(result, t, y);

    eq_.rhs_packed(t, y.data(), k1_.data());
    double h = initial_step(t, y);
    double fac_old = 1e-4;
    std::size_t next = 0;

    while (next < events.size()) {
      if (cancel != nullptr && cancel->load(std::memory_order_relaxed)) {
        throw IntegrationError("run cancelled at t=" + format(t), t);
      }
      const Event& target = events[next];
      h = std::min(h, cfg_.max_step);
      double step = h;
      bool clipped = false;
      if (t + step >= target.time - 1e-12 * std::max(1.0, std::abs(target.time))) {
        step = target.time - t;
        clipped = true;
      }
      const double min_step = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
      if (step < min_step) {
        throw IntegrationError("step size underflow near t=" + format(t) +
                                   " (stiff region; last good time " + format(t) + ")",
                               t);
      }

      const double err = attempt(t, step, y);
      if (!std::isfinite(err)) {
        h = step * kFacMin;
        ++result.rejected_steps;
        continue;
      }
      const double fac11 = std::pow(err, 0.2 - kBeta * 0.75);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(fac_old, kBeta);
        fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
        fac_old = std::max(err, 1e-4);
        const double proposed = step / fac;

        t = clipped ? target.time : t + step;
        y.swap(ynew_);
        k1_.swap(k7_);
        ++result.step_count;
        if (cfg_.hermitize_every_step) layout_.hermitize(y.data());

        const double drift = std::abs(layout_.trace(y.data()) - trace0);
        result.max_trace_drift = std::max(result.max_trace_drift, drift);
        if (drift > kTraceDriftLimit) {
          throw IntegrationError("trace drifted by " + format(drift) + " at t=" + format(t), t);
        }

        h = clipped ? std::max(proposed, h) : proposed;
        if (clipped) {
          if (target.sample) record(result, t, y);
          // H is discontinuous across a breakpoint, so the FSAL stage is stale.
          if (target.breakpoint) eq_.rhs_packed(t, y.data(), k1_.data());
          ++next;
        }
      } else {
        h = step / std::min(1.0 / kFacMin, fac11 / kSafety);
        ++result.rejected_steps;
      }
    }

    result.final_state.matrix = layout_.unpack(y.data());
    result.final_state.time = t;
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();
    return result;
  }

 private:
  static std::string format(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
  }

  void record(SimResult& result, double t, const std::vector<double>& y) const {
    Sample s{t, std::vector<double>(static_cast<std::size_t>(d_))};
    for (int i = 0; i < d_; ++i) s.populations[static_cast<std::size_t>(i)] = y[layout_.diagonal_offset(i)];
    result.samples.push_back(std::move(s));
    const DensityState state{layout_.unpack(y.data()), t};
    result.min_eigenvalue = std::min(result.min_eigenvalue, state.min_eigenvalue());
  }

  // RMS over all stored components, each scaled by abs_tol + rel_tol * max(|y0|, |y1|).
  double error_norm(const double* y0, const double* y1, const double* e) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double r = e[i] / sk;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(n_));
  }

  double initial_step(double t, const std::vector<double>& y) {
    // Hairer's starting-step heuristic, capped at max_step.
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
      d0 += (y[i] / sk) * (y[i] / sk);
      d1 += (k1_[i] / sk) * (k1_[i] / sk);
    }
    d0 = std::sqrt(d0 / n_);
    d1 = std::sqrt(d1 / n_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg_.max_step);
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y[i] + h0 * k1_[i];
    eq_.rhs_packed(t + h0, tmp_.data(), k2_.data());
    double d2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
      d2 += ((k2_[i] - k1_[i]) / sk) * ((k2_[i] - k1_[i]) / sk);
    }
    d2 = std::sqrt(d2 / n_) / h0;
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, cfg_.max_step});
  }

  // One Dormand-Prince step from (t, y) with k1 = f(t, y); leaves the
  // candidate in ynew_ and f(t+h, ynew_) in k7_. Returns the scaled error.
  double attempt(double t, double h, const std::vector<double>& yv) {
    const double* y = yv.data();
    double* tmp = tmp_.data();
    const double *k1 = k1_.data(), *k2 = k2_.data(), *k3 = k3_.data(), *k4 = k4_.data(),
               *k5 = k5_.data(), *k6 = k6_.data();
    const std::size_t n = n_;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    eq_.rhs_packed(t + c2 * h, tmp, k2_.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eq_.rhs_packed(t + c3 * h, tmp, k3_.data());
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eq_.rhs_packed(t + c4 * h, tmp, k4_.data());
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    eq_.rhs_packed(t + c5 * h, tmp, k5_.data());
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    eq_.rhs_packed(t + h, tmp, k6_.data());
    double* ynew = ynew_.data();
    for (std::size_t i = 0; i < n; ++i) {
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    }
    eq_.rhs_packed(t + h, ynew, k7_.data());
    const double* k7 = k7_.data();
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    return error_norm(y, ynew, tmp);
  }

  const MasterEquation& eq_;
  const PackedLayout& layout_;
  const IntegratorConfig& cfg_;
  int d_;
  std::size_t n_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_;
};

void finish_metrics(const MasterEquation& eq, SimResult& result) {
  const auto& basis = eq.basis();
  result.efficiency = efficiency(basis, result.final_state);
  result.loss_u = loss_u(basis, result.final_state);
  result.truncation_population = motional_population(basis, result.final_state, basis.n_max());
  result.truncation_flag = result.truncation_population > kTruncationThreshold;
}

}  // namespace

SimResult run(const MasterEquation& eq, const DensityState& rho0, const IntegratorConfig& cfg,
              const std::atomic<bool>* cancel) {
  cfg.validate();
  check_initial_state(eq, rho0);
  Stepper stepper(eq, cfg);
  SimResult result = stepper.integrate(rho0, cancel);
  finish_metrics(eq, result);
  result.per_cycle_efficiency = {result.efficiency};
  result.per_cycle_loss = {result.loss_u};
  return result;
}

SimResult run(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho0,
              const IntegratorConfig& cfg) {
  return run(MasterEquation(spec, schedule), rho0, cfg);
}

SimResult run_cycles(const MasterEquation& eq, const DensityState& rho0, const IntegratorConfig& cfg,
                     int cycles, const std::atomic<bool>* cancel) {
  if (cycles < 1) throw ValidationError("cycles must be >= 1");
  const double window = eq.schedule().t_end() - eq.schedule().t_start();
  SimResult total;
  DensityState state = rho0;
  for (int c = 0; c < cycles; ++c) {
    if (c > 0) state = motional_reset(eq.basis(), state);
    SimResult one = run(eq, state, cfg, cancel);
    const double offset = c * window;
    for (auto& s : one.samples) {
      s.time += offset;
      total.samples.push_back(std::move(s));
    }
    total.step_count += one.step_count;
    total.rejected_steps += one.rejected_steps;
    total.wall_time += one.wall_time;
    total.max_trace_drift = std::max(total.max_trace_drift, one.max_trace_drift);
    total.min_eigenvalue = c == 0 ? one.min_eigenvalue : std::min(total.min_eigenvalue, one.min_eigenvalue);
    total.per_cycle_efficiency.push_back(one.efficiency);
    total.per_cycle_loss.push_back(one.loss_u);
    state = one.final_state;
    total.final_state = one.final_state;
    total.final_state.time += offset;
  }
  finish_metrics(eq, total);
  return total;
}

SimResult run_cycles(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho0,
                     const IntegratorConfig& cfg, int cycles) {
  return run_cycles(MasterEquation(spec, schedule), rho0, cfg, cycles);
}

}  // namespace rotcool
