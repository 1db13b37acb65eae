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

// Joint internal (x) motional state space of a trapped rotor.
//
// Units: hbar = 1 and the trap frequency nu = 1. Every rate and frequency is
// a multiple of nu and every time a multiple of 1/nu.

#pragma once

#include <complex>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rotcool {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// One Raman step of the transfer chain, |upper, n> -> |lower, n+1>.
struct ChainStep {
  int upper_j = 1;
  int lower_j = 0;

  friend bool operator==(const ChainStep&, const ChainStep&) = default;
};

struct SystemSpec {
  int j_max = 1;         // rotational cutoff
  int n_max = 2;         // Fock cutoff
  double eta = 0.1;      // Lamb-Dicke parameter, same for every leg
  double gamma_j = 0.01; // e -> |J> decay rate, per J
  double gamma_u = 0.01; // e -> |u> decay rate
  double beta_b = 0.15;  // thermal parameter beta*B
  std::vector<ChainStep> chain;  // empty means the default ladder

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;

  /// The ladder J_max -> J_max-1, ..., 1 -> 0.
  static std::vector<ChainStep> default_ladder(int j_max);

  /// Chain actually used: `chain`, or the default ladder when it is empty.
  std::vector<ChainStep> resolved_chain() const;

  /// Throws ValidationError when an invariant is broken.
  void validate() const;
};

/// Internal label: a rotational level J, the excited level e, or the sink u.
class InternalLabel {
 public:
  enum class Kind { rotational, excited, uncoupled };

  static InternalLabel rotational(int j) { return InternalLabel(Kind::rotational, j); }
  static InternalLabel excited() { return InternalLabel(Kind::excited, -1); }
  static InternalLabel uncoupled() { return InternalLabel(Kind::uncoupled, -1); }

  Kind kind() const noexcept { return kind_; }
  /// Rotational quantum number; -1 for e and u.
  int j() const noexcept { return j_; }
  std::string to_string() const;

  friend bool operator==(const InternalLabel&, const InternalLabel&) = default;

 private:
  InternalLabel(Kind kind, int j) : kind_(kind), j_(j) {}
  Kind kind_;
  int j_;
};

/// Bijection between (internal label, n) pairs and flat indices.
///
/// Labels are laid out as J = 0..j_max, then e, then u; the motional number
/// is the fast index, so flat = slot(label) * (n_max + 1) + n.
class BasisIndex {
 public:
  BasisIndex(int j_max, int n_max);

  int j_max() const noexcept { return j_max_; }
  int n_max() const noexcept { return n_max_; }
  int motional_size() const noexcept { return n_max_ + 1; }
  int internal_size() const noexcept { return j_max_ + 3; }
  int dimension() const noexcept { return internal_size() * motional_size(); }

  int slot(const InternalLabel& label) const;
  InternalLabel label_at_slot(int slot) const;

  int index(const InternalLabel& label, int n) const;
  std::pair<InternalLabel, int> label(int index) const;

 private:
  int j_max_;
  int n_max_;
};

BasisIndex build_basis(const SystemSpec& spec);

struct LadderOps {
  CMatrix annihilate;
  CMatrix create;
};

/// a and a^dagger acting on the motional factor; a|n_max> keeps no image
/// outside the truncated space.
LadderOps ladder_ops(const BasisIndex& basis);

struct SigmaOps {
  CMatrix raise;  // |e><label| (x) 1
  CMatrix lower;  // |label><e| (x) 1
};

SigmaOps sigma_ops(const BasisIndex& basis, const InternalLabel& label);
SigmaOps sigma_ops(const BasisIndex& basis, int j);

/// Projector |label><label| (x) 1.
CMatrix internal_projector(const BasisIndex& basis, const InternalLabel& label);

}  // namespace rotcool
