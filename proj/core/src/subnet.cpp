// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hbf/subnet.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hbf {

RMat antenna_chain_gains(const CMat& h_k, int n_rf) {
  if (n_rf < 1) throw DimensionError("N_RF must be positive");
  if (h_k.rows() < n_rf) {
    throw DimensionError("dynamic mapping needs at least N_RF receive antennas");
  }
  std::vector<int> rows(static_cast<std::size_t>(h_k.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  const RVec norms = h_k.rowwise().norm();
  std::stable_sort(rows.begin(), rows.end(), [&](int a, int b) { return norms[a] > norms[b]; });
  RMat gains(h_k.cols(), n_rf);
  for (int n = 0; n < n_rf; ++n) gains.col(n) = h_k.row(rows[static_cast<std::size_t>(n)]).cwiseAbs().transpose();
  return gains;
}

namespace {

// Lexicographic cost: primary = -gain, secondary = departure from the block layout.
struct Cost {
  double primary = 0.0;
  double secondary = 0.0;

  Cost operator+(const Cost& o) const { return {primary + o.primary, secondary + o.secondary}; }
  Cost operator-(const Cost& o) const { return {primary - o.primary, secondary - o.secondary}; }
  bool operator<(const Cost& o) const {
    return primary < o.primary || (primary == o.primary && secondary < o.secondary);
  }
};

// Min-cost perfect matching on a square matrix (shortest augmenting paths with
// potentials). Returns the column assigned to each row.
std::vector<int> hungarian(const std::vector<std::vector<Cost>>& a) {
  const int n = static_cast<int>(a.size());
  const Cost inf{std::numeric_limits<double>::infinity(), 0.0};
  std::vector<Cost> u(n + 1), v(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Cost> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      Cost delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const Cost cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] = u[p[j]] + delta;
          v[j] = v[j] - delta;
        } else {
          minv[j] = minv[j] - delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

void check_gains(const RMat& gains) {
  if (gains.cols() < 1 || gains.rows() < 1 || gains.rows() % gains.cols() != 0) {
    throw DimensionError("gain matrix must be N_t x N_RF with N_t divisible by N_RF");
  }
  if (!gains.allFinite()) throw DimensionError("gain matrix has non-finite entries");
}

}  // namespace

MappingMatrix assign_antennas(const RMat& gains) {
  check_gains(gains);
  const int n_tx = static_cast<int>(gains.rows());
  const int n_rf = static_cast<int>(gains.cols());
  const int m = n_tx / n_rf;
  // Slot j belongs to chain j / M.
  std::vector<std::vector<Cost>> cost(n_tx, std::vector<Cost>(n_tx));
  for (int a = 0; a < n_tx; ++a) {
    for (int j = 0; j < n_tx; ++j) {
      const int chain = j / m;
      cost[a][j] = {-gains(a, chain), a / m == chain ? 0.0 : 1.0};
    }
  }
  const auto slot = hungarian(cost);
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n_tx, n_rf);
  for (int a = 0; a < n_tx; ++a) c(a, slot[a] / m) = 1;
  return MappingMatrix(std::move(c));
}

MappingMatrix assign_antennas_two_chain(const RMat& gains) {
  check_gains(gains);
  if (gains.cols() != 2) throw DimensionError("row elimination is defined for two RF chains");
  const int n_tx = static_cast<int>(gains.rows());
  const int m = n_tx / 2;
  Eigen::MatrixXi c = Eigen::MatrixXi::Ones(n_tx, 2);
  std::vector<char> done(static_cast<std::size_t>(n_tx), 0);
  for (int round = 0; round < m; ++round) {
    for (int n = 0; n < 2; ++n) {
      int m0 = -1;
      for (int a = 0; a < n_tx; ++a) {
        if (done[a]) continue;
        if (m0 < 0 || gains(a, n) < gains(m0, n)) m0 = a;
      }
      c(m0, n) = 0;
      done[m0] = 1;
    }
  }
  return MappingMatrix(std::move(c));
}

MappingMatrix dynamic_mapping(const CMat& h_k, int n_rf, MappingMode mode) {
  if (n_rf < 1 || h_k.cols() % n_rf != 0) {
    throw DimensionError("dynamic mapping needs N_t divisible by N_RF");
  }
  const RMat gains = antenna_chain_gains(h_k, n_rf);
  return mode == MappingMode::Optimal ? assign_antennas(gains) : assign_antennas_two_chain(gains);
}

MappingMatrix fixed_mapping(const SystemDims& dims) {
  return MappingMatrix::block_diagonal(dims.n_tx, dims.n_rf);
}

int select_best_subcarrier(const ChannelTensor& h) {
  if (h.h.empty()) throw DimensionError("channel has no subcarriers");
  int best = 0;
  double best_norm = h.h[0].squaredNorm();
  for (int k = 1; k < h.n_subcarriers(); ++k) {
    const double v = h.h[k].squaredNorm();
    if (v > best_norm) {
      best_norm = v;
      best = k;
    }
  }
  return best;
}

MappingMatrix best_subcarrier_mapping(const ChannelTensor& h, int n_rf) {
  return dynamic_mapping(h.h[select_best_subcarrier(h)], n_rf);
}

std::vector<int> odd_subcarriers(int n_subcarriers) {
  std::vector<int> out;
  for (int k = 0; k + 1 < n_subcarriers; k += 2) out.push_back(k);
  if (out.empty() && n_subcarriers > 0) out.push_back(0);
  return out;
}

DesignResult masked_design(const ChannelTensor& h, const CMat& f_full, const MappingMatrix& c,
                           const DigitalOptimal& opt) {
  const int n_streams = static_cast<int>(opt.f_opt.front().cols());
  DesignResult out;
  out.precoders.f_rf = c.apply(f_full);
  out.precoders.f_bb =
      waterfilling_digital(h, out.precoders.f_rf, opt.rho, opt.noise_var, n_streams);
  out.se = spectral_efficiency(h, out.precoders.f_rf, out.precoders.f_bb, opt.rho, opt.noise_var);
  return out;
}

ScDesignResult heuristic_sc_hbf(const UnfoldedNet& net, const ChannelTensor& h,
                                const DigitalOptimal& opt, int i_net,
                                const std::vector<int>& candidates, Rng& rng) {
  if (candidates.empty()) throw std::invalid_argument("heuristic search needs candidate subcarriers");
  for (int k : candidates) {
    if (k < 0 || k >= h.n_subcarriers()) throw DimensionError("candidate subcarrier out of range");
  }
  const DesignResult full = fc_hbf_design(net, h, opt, i_net, rng);
  ScDesignResult best;
  best.candidates = candidates;
  best.se = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    MappingMatrix c = dynamic_mapping(h.h[candidates[i]], net.n_rf);
    DesignResult r = masked_design(h, full.precoders.f_rf, c, opt);
    best.candidate_se.push_back(r.se);
    if (r.se > best.se) {
      best.se = r.se;
      best.precoders = std::move(r.precoders);
      best.mapping = std::move(c);
      best.chosen = static_cast<int>(i);
    }
  }
  return best;
}

ScDesignResult fixed_sc_hbf(const UnfoldedNet& net, const ChannelTensor& h,
                            const DigitalOptimal& opt, int i_net, Rng& rng) {
  const DesignResult full = fc_hbf_design(net, h, opt, i_net, rng);
  ScDesignResult out;
  out.mapping = MappingMatrix::block_diagonal(net.n_tx, net.n_rf);
  static_cast<DesignResult&>(out) = masked_design(h, full.precoders.f_rf, out.mapping, opt);
  out.candidate_se = {out.se};
  return out;
}

TrainResult train_submannet(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                            const TrainConfig& config) {
  const int n_rf = dims.n_rf;
  return train_unfolded(dataset, dims, config,
                        [n_rf](const ChannelTensor& h) { return best_subcarrier_mapping(h, n_rf); });
}

ScDesignResult sc_hbf_design(const UnfoldedNet& net, const ChannelTensor& h,
                             const DigitalOptimal& opt, int i_net, Rng& rng) {
  net.validate();
  if (i_net < 1) throw std::invalid_argument("sc_hbf_design: I_net must be >= 1");
  if (h.shape.n_tx != net.n_tx) throw DimensionError("network N_t does not match the channel");
  const int n_streams = static_cast<int>(opt.f_opt.front().cols());

  ScDesignResult out;
  const int k_star = select_best_subcarrier(h);
  out.candidates = {k_star};
  out.mapping = dynamic_mapping(h.h[k_star], net.n_rf);
  const RVec mask = out.mapping.mask_vector();

  CMat f_rf = out.mapping.apply(random_analog_precoder(net.n_tx, net.n_rf, rng));
  std::vector<CMat> f_bb = ls_digital(f_rf, opt.f_opt);
  for (int i = 1; i <= i_net; ++i) {
    const RealStack stack = RealStack::build(f_rf, opt.f_opt, f_bb);
    const ForwardTrace tr = forward(net, stack, mask);
    f_rf = unit_modulus_project(tr.output(), out.mapping);
    f_bb = i < i_net ? ls_digital(f_rf, opt.f_opt)
                     : waterfilling_digital(h, f_rf, opt.rho, opt.noise_var, n_streams);
  }
  out.se = spectral_efficiency(h, f_rf, f_bb, opt.rho, opt.noise_var);
  out.candidate_se = {out.se};
  out.precoders = PrecoderPair{std::move(f_rf), std::move(f_bb)};
  return out;
}

}  // namespace hbf
