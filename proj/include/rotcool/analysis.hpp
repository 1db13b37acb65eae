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

// Initial states, transfer metrics, and closed-form estimates used to check
// and plan full simulations.

#pragma once

#include <span>
#include <vector>

#include "rotcool/basis.hpp"
#include "rotcool/dynamics.hpp"
#include "rotcool/pulses.hpp"

namespace rotcool {

/// Boltzmann populations (2J+1) exp(-beta_b J(J+1)) / Z for J = 0..j_max.
std::vector<double> thermal_populations(int j_max, double beta_b);

/// Diagonal state on |J, 0> with thermal populations; e and u empty.
DensityState thermal_state(const BasisIndex& basis, const SystemSpec& spec);

/// P(0,0) = p_ground, P(1,0) = p_excited_rot.
DensityState mixed_lambda_state(const BasisIndex& basis, double p_ground, double p_excited_rot);

/// Diagonal state with P(J,0) = populations[J]; must sum to 1.
DensityState diagonal_rotational_state(const BasisIndex& basis, std::span<const double> populations);

/// Total population of the rotational ground state, summed over n.
double efficiency(const BasisIndex& basis, const DensityState& rho);
/// Total population of the sink |u>.
double loss_u(const BasisIndex& basis, const DensityState& rho);
/// Total population of an internal label, summed over n.
double label_population(const BasisIndex& basis, const DensityState& rho, const InternalLabel& label);
/// sum over internal labels of P(label, n).
double motional_population(const BasisIndex& basis, const DensityState& rho, int n);

/// Far-detuned reduction of one Raman step to a two-level system.
struct EffectiveTwoLevel {
  double omega_eff;  // eta * Omega_p * Omega_s / Delta_p
  double delta_eff;  // delta + S_s - S_p
  double stark_s;    // (eta * Omega_s)^2 / (4 Delta_s)
  double stark_p;    // Omega_p^2 / (4 Delta_p)
  double two_photon; // delta = Delta_s - Delta_p
};

/// Throws ValidationError when either single-photon detuning is zero.
EffectiveTwoLevel effective_two_level(const SystemSpec& spec, const PulseSchedule& schedule,
                                      std::size_t step, double t);

/// Omega0^2 T^2 / (|tau| |Delta_p| exp(2 tau^2 / T^2)). Large means adiabatic.
/// Returns +infinity for tau = 0, where the Stark-shift crossing does not exist.
double scrap_margin(double omega0, double width, double tau, double delta_p);

struct LandauZener {
  double lambda;       // eta^2 Omega0^4 / (2 Delta_p^2 |alpha|)
  double fraction;     // 1 - exp(-pi lambda)
  double transferred;  // p_init * fraction
};

/// Throws ValidationError for zero alpha or delta_p.
LandauZener lz_prediction(double eta, double omega0, double delta_p, double alpha, double p_init);

/// sum_J P(J) eps^J: level J needs J single-step transfers.
double chain_estimate(double epsilon_step, std::span<const double> populations);

/// sqrt(-ln(2 p_cut) kT/B), valid for small p_cut.
double populated_levels_estimate(double kt_over_b, double p_cut);
/// Number of rotational levels above population p_cut: the estimate rounded up.
int populated_levels(double kt_over_b, double p_cut);

}  // namespace rotcool
