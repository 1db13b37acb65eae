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

#include "rotcool/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rotcool/error.hpp"

namespace rotcool {

namespace {

constexpr double kCarrier = 0.5;  // carrier element of W per unit Rabi frequency

// exp(-x^2) < 1e-16 beyond |x| = 6.07; such a drive no longer changes any
// element of H at double precision.
constexpr double kNegligibleWidths = 6.07;

}  // namespace

std::vector<double> DensityState::populations() const {
  std::vector<double> p(static_cast<std::size_t>(matrix.rows()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) p[static_cast<std::size_t>(i)] = matrix(i, i).real();
  return p;
}

double DensityState::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

double DensityState::min_eigenvalue() const {
  const CMatrix h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

void DensityState::hermitize() {
  const Eigen::Index d = matrix.rows();
  for (Eigen::Index c = 0; c < d; ++c) {
    matrix(c, c) = matrix(c, c).real();
    for (Eigen::Index r = c + 1; r < d; ++r) {
      const cplx avg = 0.5 * (matrix(r, c) + std::conj(matrix(c, r)));
      matrix(r, c) = avg;
      matrix(c, r) = std::conj(avg);
    }
  }
}

MasterEquation::MasterEquation(SystemSpec spec, PulseSchedule schedule)
    : spec_(std::move(spec)), schedule_(std::move(schedule)), basis_(build_basis(spec_)), layout_(basis_) {
  spec_.validate();
  const int m = basis_.motional_size();
  excited0_ = basis_.index(InternalLabel::excited(), 0);

  // The e-J block W per unit Rabi frequency: carrier |e,n><J,n| on the
  // diagonal, red |e,n><J,n+1| and blue |e,n+1><J,n| sidebands beside it.
  for (int n = 0; n + 1 < m; ++n) sideband_.push_back(0.5 * spec_.eta * std::sqrt(double(n + 1)));
  const auto bs = static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  for (auto* v : {&w_left_lo_, &w_left_hi_, &w_right_lo_, &w_right_hi_, &n_minus_k_}) v->assign(bs, 0.0);
  for (int k = 0; k < m; ++k) {
    for (int n = 0; n < m; ++n) {
      const auto q = static_cast<std::size_t>(k * m + n);
      n_minus_k_[q] = n - k;
      if (n > 0) w_left_lo_[q] = sideband_[static_cast<std::size_t>(n - 1)];
      if (n + 1 < m) w_left_hi_[q] = sideband_[static_cast<std::size_t>(n)];
      if (k > 0) w_right_lo_[q] = sideband_[static_cast<std::size_t>(k - 1)];
      if (k + 1 < m) w_right_hi_[q] = sideband_[static_cast<std::size_t>(k)];
    }
  }

  for (const auto& step : schedule_.steps()) {
    if (step.levels.upper_j > spec_.j_max || step.levels.lower_j < 0 ||
        step.levels.lower_j >= step.levels.upper_j) {
      throw ValidationError("schedule step does not fit the system's rotational levels");
    }
    drives_.push_back({step.pump.envelope, step.levels.upper_j});
    drives_.push_back({step.stokes.envelope, step.levels.lower_j});
  }
  gamma_total_ = spec_.gamma_j * (spec_.j_max + 1) + spec_.gamma_u;
}

double MasterEquation::drive_strength(const Drive& drive, double t) {
  const double x = (t - drive.envelope.center) / drive.envelope.width;
  if (std::abs(x) > kNegligibleWidths) return 0.0;
  return drive.envelope.omega0 * std::exp(-x * x);
}

void MasterEquation::level_rabi(double t, double* omega) const {
  std::fill(omega, omega + spec_.j_max + 1, 0.0);
  for (const auto& drive : drives_) omega[drive.level] += drive_strength(drive, t);
}

void MasterEquation::diagonal(double t, double* out) const {
  const int m = basis_.motional_size();
  const int d = basis_.dimension();
  for (int i = 0; i < d; ++i) out[i] = double(i % m);

  const auto& step = schedule_.steps()[schedule_.active_step(t)];
  const double dp = detuning_at(step.pump.detuning, t);
  const double ds = detuning_at(step.stokes.detuning, t);
  const int e0 = basis_.index(InternalLabel::excited(), 0);
  const int l0 = basis_.index(InternalLabel::rotational(step.levels.lower_j), 0);
  for (int n = 0; n < m; ++n) {
    out[e0 + n] += dp;
    out[l0 + n] += dp - ds - 1.0;
  }
}

CMatrix MasterEquation::hamiltonian(double t) const {
  if (!(t >= schedule_.t_start() && t <= schedule_.t_end())) {
    throw ValidationError("time " + std::to_string(t) + " is outside the schedule window [" +
                          std::to_string(schedule_.t_start()) + ", " +
                          std::to_string(schedule_.t_end()) + "]");
  }
  const int d = dimension();
  const int m = basis_.motional_size();
  CMatrix h = CMatrix::Zero(d, d);
  std::vector<double> diag(static_cast<std::size_t>(d));
  diagonal(t, diag.data());
  for (int i = 0; i < d; ++i) h(i, i) = diag[static_cast<std::size_t>(i)];
  std::vector<double> omega(static_cast<std::size_t>(spec_.j_max + 1));
  level_rabi(t, omega.data());
  for (int j = 0; j <= spec_.j_max; ++j) {
    const double w = omega[static_cast<std::size_t>(j)];
    if (w == 0.0) continue;
    const int j0 = basis_.index(InternalLabel::rotational(j), 0);
    for (int n = 0; n < m; ++n) {
      h(excited0_ + n, j0 + n) += w * kCarrier;
      h(j0 + n, excited0_ + n) += w * kCarrier;
    }
    for (int n = 0; n + 1 < m; ++n) {
      const double s = w * sideband_[static_cast<std::size_t>(n)];
      h(excited0_ + n, j0 + n + 1) += s;
      h(j0 + n + 1, excited0_ + n) += s;
      h(excited0_ + n + 1, j0 + n) += s;
      h(j0 + n, excited0_ + n + 1) += s;
    }
  }
  return h;
}

PackedLayout::PackedLayout(const BasisIndex& basis)
    : slots_(basis.internal_size()),
      m_(basis.motional_size()),
      block_(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_)) {
  std::size_t offset = 0;
  for (int c = 0; c < slots_; ++c) {
    column_start_.push_back(offset);
    offset += static_cast<std::size_t>(slots_ - c) * 2 * block_;
  }
  size_ = offset;
}

void PackedLayout::pack(const CMatrix& full, double* out) const {
  for (int c = 0; c < slots_; ++c) {
    for (int r = c; r < slots_; ++r) {
      double* re = out + block_offset(r, c);
      double* im = re + block_;
      for (int k = 0; k < m_; ++k) {
        for (int n = 0; n < m_; ++n) {
          const cplx v = full(r * m_ + n, c * m_ + k);
          re[k * m_ + n] = v.real();
          im[k * m_ + n] = v.imag();
        }
      }
    }
  }
}

CMatrix PackedLayout::unpack(const double* packed) const {
  const int d = slots_ * m_;
  CMatrix full(d, d);
  for (int c = 0; c < slots_; ++c) {
    for (int r = c; r < slots_; ++r) {
      const double* re = packed + block_offset(r, c);
      const double* im = re + block_;
      for (int k = 0; k < m_; ++k) {
        for (int n = 0; n < m_; ++n) {
          const cplx v(re[k * m_ + n], im[k * m_ + n]);
          full(r * m_ + n, c * m_ + k) = v;
          if (r != c) full(c * m_ + k, r * m_ + n) = std::conj(v);
        }
      }
    }
  }
  return full;
}

double PackedLayout::trace(const double* packed) const {
  double total = 0.0;
  for (int i = 0; i < slots_ * m_; ++i) total += packed[diagonal_offset(i)];
  return total;
}

void PackedLayout::hermitize(double* packed) const {
  for (int s = 0; s < slots_; ++s) {
    double* re = packed + block_offset(s, s);
    double* im = re + block_;
    for (int k = 0; k < m_; ++k) {
      im[k * m_ + k] = 0.0;
      for (int n = k + 1; n < m_; ++n) {
        const double a = 0.5 * (re[k * m_ + n] + re[n * m_ + k]);
        const double b = 0.5 * (im[k * m_ + n] - im[n * m_ + k]);
        re[k * m_ + n] = a;
        re[n * m_ + k] = a;
        im[k * m_ + n] = b;
        im[n * m_ + k] = -b;
      }
    }
  }
}

void MasterEquation::rhs(double t, const cplx* rho, cplx* drho) const {
  const int d = dimension();
  std::vector<double> packed(layout_.size()), dpacked(layout_.size());
  layout_.pack(Eigen::Map<const CMatrix>(rho, d, d), packed.data());
  rhs_packed(t, packed.data(), dpacked.data());
  Eigen::Map<CMatrix>(drho, d, d) = layout_.unpack(dpacked.data());
}

void MasterEquation::rhs_packed(double t, const double* rho, double* drho) const {
  const int m = layout_.block_size();
  const int slots = layout_.slots();
  const auto um = static_cast<std::size_t>(m);
  const std::size_t bs = um * um;
  const int se = basis_.slot(InternalLabel::excited());
  const int su = basis_.slot(InternalLabel::uncoupled());

  std::vector<double> work(static_cast<std::size_t>(dimension() + spec_.j_max + 1) + 6 * bs);
  double* energy = work.data();
  double* omega = energy + dimension();
  double* adj = omega + spec_.j_max + 1;  // adjoint of a stored block
  double* acc = adj + 2 * bs;             // sums over driven levels
  double* adj2 = acc + 2 * bs;
  diagonal(t, energy);
  level_rabi(t, omega);
  // Rotational slots are numbered by J, so omega[K] belongs to slot K.
  int active[64];
  std::vector<int> active_heap;
  int* act = active;
  if (spec_.j_max + 1 > 64) {
    active_heap.resize(static_cast<std::size_t>(spec_.j_max + 1));
    act = active_heap.data();
  }
  int n_active = 0;
  for (int j = 0; j <= spec_.j_max; ++j) {
    if (omega[j] != 0.0) act[n_active++] = j;
  }

  // Block (I, J) of rho for any pair of slots.
  auto block = [&](int i, int j, double* buf) -> const double* {
    if (i >= j) return rho + layout_.block_offset(i, j);
    const double* re = rho + layout_.block_offset(j, i);
    const double* im = re + bs;
    for (std::size_t k = 0; k < um; ++k) {
      for (std::size_t n = 0; n < um; ++n) {
        buf[k * um + n] = re[n * um + k];
        buf[bs + k * um + n] = -im[n * um + k];
      }
    }
    return buf;
  };
  // o += i a (x shifted by `shift` entries, times lo/hi) plus the carrier.
  auto add_banded = [bs](double* __restrict o, const double* __restrict x, double a, const double* lo,
                         const double* hi, std::size_t shift) {
    double* __restrict ore = o;
    double* __restrict oim = o + bs;
    const double* xre = x;
    const double* xim = x + bs;
    const double c = a * kCarrier;
    for (std::size_t q = 0; q < bs; ++q) {
      ore[q] -= c * xim[q];
      oim[q] += c * xre[q];
    }
    for (std::size_t q = shift; q < bs; ++q) {
      ore[q] -= a * lo[q] * xim[q - shift];
      oim[q] += a * lo[q] * xre[q - shift];
    }
    for (std::size_t q = 0; q + shift < bs; ++q) {
      ore[q] -= a * hi[q] * xim[q + shift];
      oim[q] += a * hi[q] * xre[q + shift];
    }
  };
  // o += i a (W x), o += i a (x W)
  auto add_wx = [&](double* o, const double* x, double a) {
    add_banded(o, x, a, w_left_lo_.data(), w_left_hi_.data(), 1);
  };
  auto add_xw = [&](double* o, const double* x, double a) {
    add_banded(o, x, a, w_right_lo_.data(), w_right_hi_.data(), um);
  };
  auto accumulate = [bs](double* __restrict dst, const double* __restrict src, double a) {
    for (std::size_t q = 0; q < 2 * bs; ++q) dst[q] += a * src[q];
  };

  const double half = 0.5 * gamma_total_;
  const double* excited_block = rho + layout_.block_offset(se, se);
  const double* nk = n_minus_k_.data();

  for (int jc = 0; jc < slots; ++jc) {
    for (int ir = jc; ir < slots; ++ir) {
      const double* __restrict xre = rho + layout_.block_offset(ir, jc);
      const double* __restrict xim = xre + bs;
      double* __restrict ore = drho + layout_.block_offset(ir, jc);
      double* __restrict oim = ore + bs;

      // -i (E_r - E_c) rho_rc with E = n + slot offset, and the anticommutator
      // with the excited-state projector.
      const double shift = energy[ir * m] - energy[jc * m];
      const double decay = half * ((ir == se) + (jc == se));
      for (std::size_t q = 0; q < bs; ++q) {
        const double w = nk[q] + shift;
        ore[q] = w * xim[q] - decay * xre[q];
        oim[q] = -w * xre[q] - decay * xim[q];
      }

      // -i H rho
      if (ir == se && n_active > 0) {
        std::fill(acc, acc + 2 * bs, 0.0);
        for (int a = 0; a < n_active; ++a) accumulate(acc, block(act[a], jc, adj), omega[act[a]]);
        add_wx(ore, acc, -1.0);
      }
      if (ir <= spec_.j_max && omega[ir] != 0.0) add_wx(ore, block(se, jc, adj), -omega[ir]);
      // +i rho H
      if (jc == se && n_active > 0) {
        std::fill(acc, acc + 2 * bs, 0.0);
        for (int a = 0; a < n_active; ++a) accumulate(acc, block(ir, act[a], adj2), omega[act[a]]);
        add_xw(ore, acc, 1.0);
      }
      if (jc <= spec_.j_max && omega[jc] != 0.0) add_xw(ore, block(ir, se, adj), omega[jc]);

      // Jump terms |x,n><e,n| rho |e,n'><x,n'|.
      if (ir == jc) {
        const double rate = ir <= spec_.j_max ? spec_.gamma_j : (ir == su ? spec_.gamma_u : 0.0);
        if (rate != 0.0) accumulate(ore, excited_block, rate);
      }
    }
  }
}

CMatrix hamiltonian_at(const SystemSpec& spec, const PulseSchedule& schedule, double t) {
  return MasterEquation(spec, schedule).hamiltonian(t);
}

CMatrix master_rhs(const MasterEquation& eq, const DensityState& rho, double t) {
  const int d = eq.dimension();
  if (rho.matrix.rows() != d || rho.matrix.cols() != d) {
    throw ValidationError("density matrix is " + std::to_string(rho.matrix.rows()) + "x" +
                          std::to_string(rho.matrix.cols()) + ", basis dimension is " +
                          std::to_string(d));
  }
  CMatrix out(d, d);
  eq.rhs(t, rho.matrix.data(), out.data());
  return out;
}

CMatrix master_rhs(const SystemSpec& spec, const PulseSchedule& schedule, const DensityState& rho,
                   double t) {
  return master_rhs(MasterEquation(spec, schedule), rho, t);
}

DensityState motional_reset(const BasisIndex& basis, const DensityState& rho) {
  const int d = basis.dimension();
  if (rho.matrix.rows() != d || rho.matrix.cols() != d) {
    throw ValidationError("density matrix does not match the basis dimension");
  }
  DensityState out{CMatrix::Zero(d, d), rho.time};
  const int m = basis.motional_size();
  for (int s = 0; s < basis.internal_size(); ++s) {
    double total = 0.0;
    for (int n = 0; n < m; ++n) total += rho.matrix(s * m + n, s * m + n).real();
    out.matrix(s * m, s * m) = total;
  }
  return out;
}

}  // namespace rotcool
