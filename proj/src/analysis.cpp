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

#include "rotcool/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rotcool/error.hpp"

namespace rotcool {

std::vector<double> thermal_populations(int j_max, double beta_b) {
  if (j_max < 0) throw ValidationError("j_max must be >= 0");
  if (!(beta_b > 0.0)) throw ValidationError("beta_b must be > 0");
  // Weights relative to J = 0 so that large beta_b never underflows the ground state.
  std::vector<double> p(static_cast<std::size_t>(j_max + 1));
  double z = 0.0;
  for (int j = 0; j <= j_max; ++j) {
    p[static_cast<std::size_t>(j)] = (2.0 * j + 1.0) * std::exp(-beta_b * j * (j + 1.0));
    z += p[static_cast<std::size_t>(j)];
  }
  for (auto& x : p) x /= z;
  return p;
}

DensityState diagonal_rotational_state(const BasisIndex& basis, std::span<const double> populations) {
  if (populations.size() > static_cast<std::size_t>(basis.j_max() + 1)) {
    throw ValidationError("more rotational populations than levels");
  }
  double total = 0.0;
  for (double p : populations) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("populations must lie in [0, 1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("populations sum to " + std::to_string(total) + ", expected 1");
  }
  const int d = basis.dimension();
  DensityState rho{CMatrix::Zero(d, d), 0.0};
  for (std::size_t j = 0; j < populations.size(); ++j) {
    const int i = basis.index(InternalLabel::rotational(static_cast<int>(j)), 0);
    rho.matrix(i, i) = populations[j] / total;
  }
  return rho;
}

DensityState thermal_state(const BasisIndex& basis, const SystemSpec& spec) {
  const auto p = thermal_populations(basis.j_max(), spec.beta_b);
  return diagonal_rotational_state(basis, p);
}

DensityState mixed_lambda_state(const BasisIndex& basis, double p_ground, double p_excited_rot) {
  if (!(p_ground >= 0.0 && p_ground <= 1.0) || !(p_excited_rot >= 0.0 && p_excited_rot <= 1.0)) {
    throw ValidationError("probabilities must lie in [0, 1]");
  }
  const double p[] = {p_ground, p_excited_rot};
  return diagonal_rotational_state(basis, p);
}

double label_population(const BasisIndex& basis, const DensityState& rho, const InternalLabel& label) {
  double total = 0.0;
  for (int n = 0; n <= basis.n_max(); ++n) {
    const int i = basis.index(label, n);
    total += rho.matrix(i, i).real();
  }
  return total;
}

double efficiency(const BasisIndex& basis, const DensityState& rho) {
  return label_population(basis, rho, InternalLabel::rotational(0));
}

double loss_u(const BasisIndex& basis, const DensityState& rho) {
  return label_population(basis, rho, InternalLabel::uncoupled());
}

double motional_population(const BasisIndex& basis, const DensityState& rho, int n) {
  double total = 0.0;
  for (int s = 0; s < basis.internal_size(); ++s) {
    const int i = basis.index(basis.label_at_slot(s), n);
    total += rho.matrix(i, i).real();
  }
  return total;
}

EffectiveTwoLevel effective_two_level(const SystemSpec& spec, const PulseSchedule& schedule,
                                      std::size_t step, double t) {
  if (step >= schedule.steps().size()) throw ValidationError("step index out of range");
  const auto& s = schedule.steps()[step];
  const double omega_p = envelope_at(s.pump.envelope, t);
  const double omega_s = envelope_at(s.stokes.envelope, t);
  const double delta_p = detuning_at(s.pump.detuning, t);
  const double delta_s = detuning_at(s.stokes.detuning, t);
  if (delta_p == 0.0 || delta_s == 0.0) {
    throw ValidationError("effective two-level reduction needs nonzero single-photon detunings");
  }
  EffectiveTwoLevel out{};
  out.omega_eff = spec.eta * omega_p * omega_s / delta_p;
  out.stark_s = (spec.eta * omega_s) * (spec.eta * omega_s) / (4.0 * delta_s);
  out.stark_p = omega_p * omega_p / (4.0 * delta_p);
  out.two_photon = delta_s - delta_p;
  out.delta_eff = out.two_photon + out.stark_s - out.stark_p;
  return out;
}

double scrap_margin(double omega0, double width, double tau, double delta_p) {
  if (!(width > 0.0)) throw ValidationError("pulse width must be > 0");
  if (delta_p == 0.0) throw ValidationError("delta_p must be nonzero");
  if (tau == 0.0) return std::numeric_limits<double>::infinity();
  const double x = tau / width;
  return omega0 * omega0 * width * width / (std::abs(tau) * std::abs(delta_p) * std::exp(2.0 * x * x));
}

LandauZener lz_prediction(double eta, double omega0, double delta_p, double alpha, double p_init) {
  if (alpha == 0.0) throw ValidationError("alpha must be nonzero");
  if (delta_p == 0.0) throw ValidationError("delta_p must be nonzero");
  if (!(eta >= 0.0) || !(omega0 >= 0.0)) throw ValidationError("eta and omega0 must be >= 0");
  if (!(p_init >= 0.0 && p_init <= 1.0)) throw ValidationError("p_init must lie in [0, 1]");
  const double o2 = omega0 * omega0;
  LandauZener out{};
  out.lambda = eta * eta * o2 * o2 / (2.0 * delta_p * delta_p * std::abs(alpha));
  out.fraction = -std::expm1(-std::numbers::pi * out.lambda);
  out.transferred = p_init * out.fraction;
  return out;
}

double chain_estimate(double epsilon_step, std::span<const double> populations) {
  if (!(epsilon_step >= 0.0 && epsilon_step <= 1.0)) throw ValidationError("epsilon must lie in [0, 1]");
  double total = 0.0;
  double power = 1.0;
  for (double p : populations) {
    total += p * power;
    power *= epsilon_step;
  }
  return total;
}

double populated_levels_estimate(double kt_over_b, double p_cut) {
  if (!(kt_over_b > 0.0)) throw ValidationError("kT/B must be > 0");
  if (!(p_cut > 0.0 && p_cut < 0.5)) throw ValidationError("cut-off population must lie in (0, 0.5)");
  return std::sqrt(-std::log(2.0 * p_cut) * kt_over_b);
}

int populated_levels(double kt_over_b, double p_cut) {
  return static_cast<int>(std::ceil(populated_levels_estimate(kt_over_b, p_cut)));
}

}  // namespace rotcool
