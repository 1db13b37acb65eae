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

// Time-dependent Hamiltonian and Lindblad master equation.
//
// In the rotating frame the level energies are
//   |J, n>    : n                                   (nu = 1)
//   |e, n>    : n + Delta^p(t)
//   |lower, n>: n + Delta^p(t) - Delta^s(t) - 1
// where the detunings are those of the active pulse pair (the pair whose
// centre is nearest in time; pairs never overlap in the default schedules).
// With this frame |upper, n> and |lower, n+1> are degenerate at two-photon
// resonance Delta^p = Delta^s. Every pump drives |upper> <-> |e> and every
// Stokes pulse drives |lower> <-> |e> on the carrier (Omega/2) and on both
// first sidebands (eta*Omega/2 * sqrt factor). The excited level decays to
// every rotational level at gamma_j and to the sink |u> at gamma_u, without
// changing n.

#pragma once

#include <cstddef>
#include <vector>

#include "rotcool/basis.hpp"
#include "rotcool/pulses.hpp"

namespace rotcool {

/// Density matrix rho(t) with its time stamp.
struct DensityState {
  CMatrix matrix;
  double time = 0.0;

  double trace() const { return matrix.trace().real(); }
  /// Diagonal of the matrix (populations), real part.
  std::vector<double> populations() const;
  /// Max |rho - rho^dagger| element.
  double hermiticity_defect() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  /// rho <- (rho + rho^dagger) / 2
  void hermitize();
};

/// Real storage for a Hermitian D x D matrix: its m x m blocks (I, J) with
/// row slot I >= column slot J, m = n_max + 1, ordered by column slot, then
/// row slot. Each block holds m*m real parts followed by m*m imaginary parts,
/// column-major. Blocks above the diagonal follow by adjoint.
class PackedLayout {
 public:
  explicit PackedLayout(const BasisIndex& basis);

  int slots() const noexcept { return slots_; }
  int block_size() const noexcept { return m_; }
  /// Number of doubles.
  std::size_t size() const noexcept { return size_; }
  /// Offset of the real part of block (row_slot, col_slot); requires row_slot >= col_slot.
  std::size_t block_offset(int row_slot, int col_slot) const noexcept {
    return column_start_[static_cast<std::size_t>(col_slot)] +
           static_cast<std::size_t>(row_slot - col_slot) * 2 * block_;
  }
  /// Offset of Re rho(i, i) for flat basis index i.
  std::size_t diagonal_offset(int i) const noexcept {
    const int s = i / m_, n = i % m_;
    return block_offset(s, s) + static_cast<std::size_t>(n) * (m_ + 1);
  }

  /// Copies the lower blocks of `full`.
  void pack(const CMatrix& full, double* out) const;
  CMatrix unpack(const double* packed) const;
  double trace(const double* packed) const;
  /// Makes every diagonal block Hermitian.
  void hermitize(double* packed) const;

 private:
  int slots_;
  int m_;
  std::size_t block_;  // m * m
  std::size_t size_;
  std::vector<std::size_t> column_start_;
};

/// Evaluates H(t) and d(rho)/dt for a fixed system and schedule. Immutable
/// after construction and safe to share between threads.
class MasterEquation {
 public:
  MasterEquation(SystemSpec spec, PulseSchedule schedule);

  const SystemSpec& spec() const noexcept { return spec_; }
  const PulseSchedule& schedule() const noexcept { return schedule_; }
  const BasisIndex& basis() const noexcept { return basis_; }
  int dimension() const noexcept { return basis_.dimension(); }
  const PackedLayout& layout() const noexcept { return layout_; }

  /// Dense H(t). Throws ValidationError when t is outside the schedule window.
  CMatrix hamiltonian(double t) const;

  /// d(rho)/dt for a column-major D x D Hermitian rho; only its lower
  /// blocks are read. No range checks.
  void rhs(double t, const cplx* rho, cplx* drho) const;
  /// d(rho)/dt in packed storage.
  void rhs_packed(double t, const double* rho, double* drho) const;

  /// Diagonal energies of H(t) (real).
  void diagonal(double t, double* out) const;

 private:
  struct Drive {
    PulseEnvelope envelope;
    int level;  // rotational level coupled to e
  };

  // Rabi frequency of a drive at t, or 0 once the Gaussian is below double
  // precision relative to its peak.
  static double drive_strength(const Drive& drive, double t);
  // Summed Rabi frequency on each rotational level; omega has j_max + 1 entries.
  void level_rabi(double t, double* omega) const;

  SystemSpec spec_;
  PulseSchedule schedule_;
  BasisIndex basis_;
  PackedLayout layout_;
  std::vector<Drive> drives_;
  std::vector<double> sideband_;  // sideband element of the e-J block for n <-> n+1, per unit Rabi frequency
  // Per packed-block entry q = k*m + n: coefficients of x[q-1], x[q+1] in W x
  // and of x[q-m], x[q+m] in x W. Zero where the neighbour is outside the block.
  std::vector<double> w_left_lo_, w_left_hi_, w_right_lo_, w_right_hi_;
  std::vector<double> n_minus_k_;  // n - k per block entry
  int excited0_ = 0;          // flat index of |e, 0>
  double gamma_total_ = 0.0;
};

CMatrix hamiltonian_at(const SystemSpec& spec, const PulseSchedule& schedule, double t);

/// -i[H(t), rho] + sum_J gamma_j D[sigma_-^J] rho + gamma_u D[sigma_-^u] rho.
/// Throws ValidationError on a dimension mismatch.
CMatrix master_rhs(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho,
                   double t);
CMatrix master_rhs(const MasterEquation& eq, const DensityState& rho, double t);

/// Idealised sympathetic cooling: every internal label keeps its total
/// population, moved to n = 0; all coherences are dropped.
DensityState motional_reset(const BasisIndex& basis, const DensityState& rho);

}  // namespace rotcool
