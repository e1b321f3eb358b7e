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

#include "hbf/baselines.hpp"

#include <cmath>

namespace hbf {

double dbf_se(const ChannelTensor& h, const DigitalOptimal& opt) {
  return spectral_efficiency(h, opt.f_opt, opt.rho, opt.noise_var);
}

CMat genie_codebook(const ChannelTensor& h, int n_tx_h, int n_tx_v) {
  if (n_tx_h * n_tx_v != h.shape.n_tx) throw DimensionError("array factorization does not match N_t");
  const int n_paths = h.paths.size();
  CMat book(h.shape.n_tx, n_paths);
  for (int p = 0; p < n_paths; ++p) {
    book.col(p) = array_response(n_tx_h, n_tx_v, h.paths.aod_az[p], h.paths.aod_el[p],
                                 h.shape.center_freq, h.shape.center_freq);
  }
  return book;
}

namespace {

double residual_energy(const std::vector<CMat>& res) {
  double total = 0.0;
  for (const auto& r : res) total += r.squaredNorm();
  return total;
}

}  // namespace

OmpResult omp_hbf(const ChannelTensor& h, const DigitalOptimal& opt, const CMat& codebook,
                  int n_rf) {
  const int n_tx = h.shape.n_tx;
  if (codebook.rows() != n_tx) throw DimensionError("codebook rows must equal N_t");
  if (n_rf < 1) throw DimensionError("OMP needs N_RF >= 1");
  if (codebook.cols() < n_rf) throw DimensionError("OMP needs at least N_RF codebook atoms");
  if (opt.f_opt.size() != h.h.size()) throw DimensionError("F_opt does not match the channel");
  const int n_streams = static_cast<int>(opt.f_opt.front().cols());

  // Unit-modulus atoms.
  const CMat atoms = codebook * std::sqrt(static_cast<double>(n_tx));
  OmpResult out;
  std::vector<CMat> res = opt.f_opt;
  out.residual_norms.push_back(residual_energy(res));
  CMat f_rf(n_tx, 0);
  for (int i = 0; i < n_rf; ++i) {
    RVec corr = RVec::Zero(atoms.cols());
    for (const auto& r : res) corr += (atoms.adjoint() * r).rowwise().squaredNorm();
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < corr.size(); ++j) {
      if (corr[j] > corr[best]) best = j;
    }
    out.selected.push_back(static_cast<int>(best));
    f_rf.conservativeResize(Eigen::NoChange, f_rf.cols() + 1);
    f_rf.col(f_rf.cols() - 1) = atoms.col(best);
    const std::vector<CMat> f_bb = ls_digital(f_rf, opt.f_opt);
    for (std::size_t k = 0; k < res.size(); ++k) res[k] = opt.f_opt[k] - f_rf * f_bb[k];
    out.residual_norms.push_back(residual_energy(res));
  }
  out.precoders.f_bb = waterfilling_digital(h, f_rf, opt.rho, opt.noise_var, n_streams);
  out.se = spectral_efficiency(h, f_rf, out.precoders.f_bb, opt.rho, opt.noise_var);
  out.precoders.f_rf = std::move(f_rf);
  return out;
}

}  // namespace hbf
