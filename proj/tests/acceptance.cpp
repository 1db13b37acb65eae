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

// End-to-end checks against reference numbers. Prints one PASS/FAIL line per
// criterion, with the measured values. Pass criterion names to run a subset.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rotcool/analysis.hpp"
#include "rotcool/config.hpp"
#include "rotcool/dynamics.hpp"
#include "rotcool/integrate.hpp"

using namespace rotcool;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
};

void Outcome::check(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  pass = pass && ok;
  if (!detail.empty()) detail += "; ";
  detail += buf;
  if (!ok) detail += " [x]";
}

bool within(double x, double centre, double tol) { return std::abs(x - centre) <= tol; }

void note(const std::string& what, const SimResult& r) {
  std::printf("  .. %s: eps=%.6f loss=%.6f steps=%ld wall=%.1fs drift=%.1e\n", what.c_str(), r.efficiency, r.loss_u,
              r.step_count, r.wall_time, r.max_trace_drift);
  std::fflush(stdout);
}

SimResult sim(const std::string& what, const RunConfig& cfg) {
  SimResult r = simulate(cfg);
  note(what, r);
  return r;
}

RunConfig lambda_base() {
  RunConfig c;
  c.system.j_max = 1;
  c.system.n_max = 2;
  c.system.gamma_j = c.system.gamma_u = 0.01;
  c.initial.kind = InitialState::Kind::lambda_mixture;
  c.initial.p_ground = 0.3;
  c.initial.p_excited = 0.7;
  return c;
}

RunConfig carp_lambda() {
  RunConfig c = lambda_base();
  c.scheme = Scheme::carp;
  c.pulses.omega0_p = c.pulses.omega0_s = 5.0;
  c.pulses.width = 800;
  c.pulses.tau = 0;
  c.pulses.delta_p = 100;
  c.pulses.alpha = 4.69e-5;
  return c;
}

RunConfig stirap_lambda(double delta, double gamma) {
  RunConfig c = lambda_base();
  c.scheme = Scheme::stirap;
  c.system.gamma_j = c.system.gamma_u = gamma;
  c.pulses.omega0_p = c.pulses.omega0_s = 0.05;
  c.pulses.width = 4500;
  c.pulses.tau = 3500;
  c.pulses.delta_p = delta;
  return c;
}

RunConfig six_level(double delta_p, double omega0, int cycles) {
  RunConfig c;
  c.scheme = Scheme::carp;
  c.system.j_max = 5;
  c.system.n_max = 6;
  c.system.gamma_j = c.system.gamma_u = 0.01;
  c.system.beta_b = 0.15;
  c.pulses.omega0_p = c.pulses.omega0_s = omega0;
  c.pulses.width = 800;
  c.pulses.tau = 0;
  c.pulses.tau_tilde = 4800;
  c.pulses.delta_p = delta_p;
  c.pulses.alpha = 16e-5;
  c.initial.kind = InitialState::Kind::thermal;
  c.cycles = cycles;
  return c;
}

// Runs shared between criteria are computed once.
const SimResult& carp_run() {
  static const SimResult r = sim("carp lambda", carp_lambda());
  return r;
}
const SimResult& stirap_run() {
  static const SimResult r = sim("stirap delta=0 gamma=0.01", stirap_lambda(0.0, 0.01));
  return r;
}
const SimResult& six_one_cycle() {
  static const SimResult r = sim("six-level delta=100", six_level(100, 5.0, 1));
  return r;
}

Outcome carp() {
  Outcome o;
  const auto& r = carp_run();
  o.check(r.efficiency >= 0.97, "eps=%.4f >= 0.97", r.efficiency);
  o.check(r.wall_time < 300, "wall=%.0fs < 300s", r.wall_time);
  return o;
}

Outcome scrap() {
  Outcome o;
  RunConfig c = lambda_base();
  c.scheme = Scheme::scrap;
  c.pulses.omega0_p = c.pulses.omega0_s = 7.5;
  c.pulses.width = 800;
  c.pulses.tau = 320;
  c.pulses.delta_p = 100;
  const auto r = sim("scrap lambda", c);
  const double st = stirap_run().efficiency;
  o.check(r.efficiency >= 0.90 && r.efficiency <= 1.0, "eps=%.4f in [0.90, 1]", r.efficiency);
  o.check(r.efficiency > st, "above stirap %.4f", st);
  return o;
}

Outcome stirap() {
  Outcome o;
  const double e0 = stirap_run().efficiency;
  o.check(e0 >= 0.68 && e0 <= 0.78, "eps=%.4f in [0.68, 0.78]", e0);
  for (double gamma : {0.01, 0.0}) {
    const double base = gamma == 0.01 ? e0 : sim("stirap delta=0 gamma=0", stirap_lambda(0.0, 0.0)).efficiency;
    for (double d : {5.0, -5.0}) {
      char what[64];
      std::snprintf(what, sizeof what, "stirap delta=%+g gamma=%g", d, gamma);
      const double e = sim(what, stirap_lambda(d, gamma)).efficiency;
      o.check(e < base, "gamma=%g delta=%+g: %.4f < %.4f", gamma, d, e, base);
    }
  }
  return o;
}

Outcome six() {
  Outcome o;
  const double e1 = six_one_cycle().efficiency;
  const double l1 = six_one_cycle().loss_u;
  o.check(within(e1, 0.92, 0.02), "delta=100: eps=%.4f in 0.92+-0.02", e1);
  o.check(within(l1, 0.015, 0.005), "loss=%.4f in 0.015+-0.005", l1);
  const auto r200 = sim("six-level delta=200", six_level(200, 5.0 * std::sqrt(2.0), 1));
  o.check(within(r200.efficiency, 0.957, 0.015), "delta=200: eps=%.4f in 0.957+-0.015", r200.efficiency);
  o.check(r200.loss_u < 0.009, "loss=%.4f < 0.009", r200.loss_u);
  const auto r1000 = sim("six-level delta=1000", six_level(1000, 5.0 * std::sqrt(10.0), 1));
  o.check(within(r1000.efficiency, 0.989, 0.01), "delta=1000: eps=%.4f in 0.989+-0.01", r1000.efficiency);
  o.check(r1000.loss_u < 0.002, "loss=%.4f < 0.002", r1000.loss_u);
  return o;
}

Outcome two_cycles() {
  Outcome o;
  const auto r = sim("six-level delta=100, two cycles", six_level(100, 5.0, 2));
  o.check(r.efficiency >= 0.98, "eps=%.4f >= 0.98", r.efficiency);
  o.check(within(r.loss_u, 0.016, 0.005), "loss=%.4f in 0.016+-0.005", r.loss_u);
  return o;
}

Outcome oracles() {
  Outcome o;
  struct Point {
    double delta, omega, alpha;
  };
  std::vector<Point> grid;
  for (double omega : {1.5, 2.0, 2.5, 3.0, 3.5}) {
    for (double alpha : {5e-5, 1e-4}) grid.push_back({100, omega, alpha});
  }
  grid.push_back({200, 3.0, 5e-5});
  grid.push_back({200, 4.0, 5e-5});
  double worst = 0;
  for (const auto& p : grid) {
    RunConfig c = lambda_base();
    c.system.gamma_j = c.system.gamma_u = 0.0;
    c.initial.p_ground = 0.0;
    c.initial.p_excited = 1.0;
    c.pulses.omega0_p = c.pulses.omega0_s = p.omega;
    c.pulses.width = 800;
    c.pulses.delta_p = p.delta;
    c.pulses.alpha = p.alpha;
    const double sim_eps = simulate(c).efficiency;
    const auto lz = lz_prediction(c.system.eta, p.omega, p.delta, p.alpha, 1.0);
    std::printf("  .. landau-zener delta=%g omega=%g alpha=%g: lambda=%.3f predicted=%.4f simulated=%.4f\n", p.delta,
                p.omega, p.alpha, lz.lambda, lz.transferred, sim_eps);
    std::fflush(stdout);
    worst = std::max(worst, std::abs(sim_eps - lz.transferred));
  }
  o.check(worst <= 0.02, "%zu-point grid: max |sim - LZ| = %.4f <= 0.02", grid.size(), worst);

  // Single step with the six-level pulses; the excited state decays at the
  // six-level total rate, losses to the other rotational levels going to u.
  RunConfig step = lambda_base();
  step.system.n_max = 6;
  step.system.gamma_j = 0.01;
  step.system.gamma_u = 0.05;
  step.initial.p_ground = 0.0;
  step.initial.p_excited = 1.0;
  step.pulses.omega0_p = step.pulses.omega0_s = 5.0;
  step.pulses.width = 800;
  step.pulses.delta_p = 100;
  step.pulses.alpha = 16e-5;
  const double eps_step = sim("single step, matched lifetime", step).efficiency;
  const auto p = thermal_populations(5, 0.15);
  const double estimate = chain_estimate(eps_step, p);
  const double full = six_one_cycle().efficiency;
  o.check(std::abs(estimate - full) <= 0.03, "chain estimate %.4f (step %.4f) vs six-level %.4f", estimate, eps_step,
          full);

  step.system.gamma_u = 0.01;
  const double eps_same = sim("single step, equal rates", step).efficiency;
  std::printf("  .. equal-rate single step: step %.4f, chain estimate %.4f, diff %.4f (informational)\n", eps_same,
              chain_estimate(eps_same, p), chain_estimate(eps_same, p) - full);
  return o;
}

Outcome properties() {
  Outcome o;
  // trace and sink monotonicity along a full run
  const auto& carp_r = carp_run();
  o.check(carp_r.max_trace_drift <= 1e-6, "trace drift %.1e", carp_r.max_trace_drift);
  const BasisIndex lb = build_basis(carp_lambda().system);
  double last_u = 0;
  bool monotone = true;
  for (const auto& s : carp_r.samples) {
    double u = 0;
    for (int n = 0; n <= lb.n_max(); ++n) u += s.populations[lb.index(InternalLabel::uncoupled(), n)];
    monotone = monotone && u >= last_u - 1e-12;
    last_u = u;
  }
  o.check(monotone, "u monotone over %zu samples", carp_r.samples.size());

  // Hermitian Hamiltonian at random times of the six-level schedule
  const RunConfig six = six_level(100, 5.0, 1);
  const PulseSchedule sched = build_schedule(six);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> t(sched.t_start(), sched.t_end());
  double defect = 0;
  for (int k = 0; k < 1000; ++k) {
    const CMatrix h = hamiltonian_at(six.system, sched, t(rng));
    defect = std::max(defect, (h - h.adjoint()).cwiseAbs().maxCoeff());
  }
  o.check(defect == 0.0, "H - H^dag max %.1e at 1000 times", defect);

  // purity without decay
  RunConfig pure = carp_lambda();
  pure.system.gamma_j = pure.system.gamma_u = 0.0;
  pure.initial.p_ground = 0.0;
  pure.initial.p_excited = 1.0;
  const auto pr = simulate(pure);
  const double purity = (pr.final_state.matrix * pr.final_state.matrix).trace().real();
  o.check(std::abs(purity - 1.0) <= 1e-6, "purity %.9f", purity);

  // spontaneous decay from |e, n> keeps n
  RunConfig decay = lambda_base();
  decay.pulses.omega0_p = decay.pulses.omega0_s = 0.0;
  decay.pulses.width = 100;
  decay.pulses.alpha = 1e-3;
  const BasisIndex db = build_basis(decay.system);
  DensityState rho{CMatrix::Zero(db.dimension(), db.dimension()), 0.0};
  const int ie = db.index(InternalLabel::excited(), 1);
  rho.matrix(ie, ie) = 1.0;
  const auto dr = run(decay.system, build_schedule(decay), rho, decay.integrator);
  const double kept = motional_population(db, dr.final_state, 1);
  o.check(std::abs(kept - 1.0) <= 1e-9 && label_population(db, dr.final_state, InternalLabel::excited()) < 1e-6,
          "decay keeps n: P(n=1)=%.12f", kept);

  // halving the tolerances leaves the result unchanged; a short, mildly
  // detuned pulse keeps the step size tolerance-limited
  RunConfig tol = carp_lambda();
  tol.system.n_max = 3;
  tol.pulses.omega0_p = tol.pulses.omega0_s = 2.0;
  tol.pulses.width = 40;
  tol.pulses.delta_p = 10;
  tol.pulses.alpha = 2e-3;
  tol.integrator.max_step = 10.0;
  const auto a = simulate(tol);
  tol.integrator.rel_tol /= 2;
  tol.integrator.abs_tol /= 2;
  const auto b = simulate(tol);
  o.check(std::abs(a.efficiency - b.efficiency) <= 1e-6 && std::abs(a.loss_u - b.loss_u) <= 1e-6 &&
              b.step_count > a.step_count,
          "tolerance halving: d_eps=%.1e d_loss=%.1e (%ld -> %ld steps)", std::abs(a.efficiency - b.efficiency),
          std::abs(a.loss_u - b.loss_u), a.step_count, b.step_count);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"carp_lambda", carp},   {"scrap_lambda", scrap},     {"stirap_optimum", stirap},
      {"six_level", six},      {"two_cycles", two_cycles},  {"oracles", oracles},
      {"properties", properties},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& [name, fn] : criteria) known = known || name == w;
    if (!known) {
      std::fprintf(stderr, "unknown criterion '%s'\n", w.c_str());
      return 2;
    }
  }

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), name) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s (%.0fs)\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed ? 1 : 0;
}
