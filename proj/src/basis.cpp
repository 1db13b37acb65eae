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

#include "rotcool/basis.hpp"

#include <cmath>
#include <set>

#include "rotcool/error.hpp"

namespace rotcool {

std::vector<ChainStep> SystemSpec::default_ladder(int j_max) {
  std::vector<ChainStep> steps;
  for (int j = j_max; j >= 1; --j) steps.push_back({j, j - 1});
  return steps;
}

std::vector<ChainStep> SystemSpec::resolved_chain() const {
  return chain.empty() ? default_ladder(j_max) : chain;
}

void SystemSpec::validate() const {
  if (j_max < 1) throw ValidationError("j_max must be >= 1");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be > 0");
  if (!(gamma_j >= 0.0) || !std::isfinite(gamma_j)) throw ValidationError("gamma_j must be >= 0");
  if (!(gamma_u >= 0.0) || !std::isfinite(gamma_u)) throw ValidationError("gamma_u must be >= 0");
  if (!(beta_b > 0.0)) throw ValidationError("beta_b must be > 0");
  std::set<int> uppers;
  for (const auto& step : chain) {
    if (step.lower_j < 0 || step.lower_j >= step.upper_j || step.upper_j > j_max) {
      throw ValidationError("chain step " + std::to_string(step.upper_j) + ":" +
                            std::to_string(step.lower_j) +
                            " must satisfy 0 <= lower < upper <= j_max");
    }
    // The pulse timing of a step is keyed on its upper level.
    if (!uppers.insert(step.upper_j).second) {
      throw ValidationError("chain has two steps leaving J=" + std::to_string(step.upper_j));
    }
  }
}

std::string InternalLabel::to_string() const {
  switch (kind_) {
    case Kind::rotational: return std::to_string(j_);
    case Kind::excited: return "e";
    case Kind::uncoupled: return "u";
  }
  return "?";
}

BasisIndex::BasisIndex(int j_max, int n_max) : j_max_(j_max), n_max_(n_max) {
  if (j_max < 1) throw ValidationError("j_max must be >= 1");
  if (n_max < 1) throw ValidationError("n_max must be >= 1");
}

int BasisIndex::slot(const InternalLabel& label) const {
  switch (label.kind()) {
    case InternalLabel::Kind::rotational:
      if (label.j() < 0 || label.j() > j_max_) {
        throw ValidationError("rotational level J=" + std::to_string(label.j()) +
                              " outside 0..j_max");
      }
      return label.j();
    case InternalLabel::Kind::excited: return j_max_ + 1;
    case InternalLabel::Kind::uncoupled: return j_max_ + 2;
  }
  throw ValidationError("unknown internal label");
}

InternalLabel BasisIndex::label_at_slot(int slot) const {
  if (slot < 0 || slot >= internal_size()) throw ValidationError("internal slot out of range");
  if (slot <= j_max_) return InternalLabel::rotational(slot);
  return slot == j_max_ + 1 ? InternalLabel::excited() : InternalLabel::uncoupled();
}

int BasisIndex::index(const InternalLabel& label, int n) const {
  if (n < 0 || n > n_max_) throw ValidationError("motional number outside 0..n_max");
  return slot(label) * motional_size() + n;
}

std::pair<InternalLabel, int> BasisIndex::label(int index) const {
  if (index < 0 || index >= dimension()) throw ValidationError("flat index out of range");
  return {label_at_slot(index / motional_size()), index % motional_size()};
}

BasisIndex build_basis(const SystemSpec& spec) { return BasisIndex(spec.j_max, spec.n_max); }

LadderOps ladder_ops(const BasisIndex& basis) {
  const int d = basis.dimension();
  const int m = basis.motional_size();
  CMatrix a = CMatrix::Zero(d, d);
  for (int s = 0; s < basis.internal_size(); ++s) {
    for (int n = 1; n < m; ++n) a(s * m + n - 1, s * m + n) = std::sqrt(double(n));
  }
  CMatrix adag = a.adjoint();
  return {std::move(a), std::move(adag)};
}

SigmaOps sigma_ops(const BasisIndex& basis, const InternalLabel& label) {
  if (label.kind() == InternalLabel::Kind::excited) {
    throw ValidationError("sigma operators connect e to J or u, not e to itself");
  }
  const int d = basis.dimension();
  CMatrix raise = CMatrix::Zero(d, d);
  for (int n = 0; n <= basis.n_max(); ++n) {
    raise(basis.index(InternalLabel::excited(), n), basis.index(label, n)) = 1.0;
  }
  CMatrix lower = raise.adjoint();
  return {std::move(raise), std::move(lower)};
}

SigmaOps sigma_ops(const BasisIndex& basis, int j) {
  return sigma_ops(basis, InternalLabel::rotational(j));
}

CMatrix internal_projector(const BasisIndex& basis, const InternalLabel& label) {
  const int d = basis.dimension();
  CMatrix p = CMatrix::Zero(d, d);
  for (int n = 0; n <= basis.n_max(); ++n) {
    const int i = basis.index(label, n);
    p(i, i) = 1.0;
  }
  return p;
}

}  // namespace rotcool
