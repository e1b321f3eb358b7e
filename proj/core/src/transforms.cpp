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

#include "hbf/transforms.hpp"

#include <string>

namespace hbf {

RVec realify(const CMat& f) {
  const auto n = f.size();
  RVec x(2 * n);
  const cd* data = f.data();
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = data[i].real();
    x[n + i] = data[i].imag();
  }
  return x;
}

CMat derealify(const RVec& x, int rows, int cols) {
  const Eigen::Index n = static_cast<Eigen::Index>(rows) * cols;
  if (rows < 0 || cols < 0 || x.size() != 2 * n) {
    throw DimensionError("derealify: vector length " + std::to_string(x.size()) +
                         " does not match 2*" + std::to_string(rows) + "*" +
                         std::to_string(cols));
  }
  CMat f(rows, cols);
  cd* data = f.data();
  for (Eigen::Index i = 0; i < n; ++i) data[i] = cd(x[i], x[n + i]);
  return f;
}

StackedKron::StackedKron(CMat f_bb, int n_tx) : f_bb_(std::move(f_bb)), n_tx_(n_tx) {
  if (n_tx < 1) throw DimensionError("StackedKron: N_t must be positive");
}

RVec StackedKron::apply(const RVec& x) const {
  const CMat f_rf = derealify(x, n_tx_, static_cast<int>(f_bb_.rows()));
  return realify(f_rf * f_bb_);
}

RVec StackedKron::apply_transpose(const RVec& z) const {
  const CMat zm = derealify(z, n_tx_, static_cast<int>(f_bb_.cols()));
  return realify(zm * f_bb_.adjoint());
}

RVec StackedKron::apply_normal(const RVec& x) const {
  const CMat f_rf = derealify(x, n_tx_, static_cast<int>(f_bb_.rows()));
  return realify(f_rf * (f_bb_ * f_bb_.adjoint()));
}

RMat StackedKron::dense() const {
  const auto n_rf = f_bb_.rows();
  const auto n_s = f_bb_.cols();
  // B~ = F_BB^T kron I: block (s, r) is F_BB(r, s) I.
  CMat bt = CMat::Zero(n_tx_ * n_s, n_tx_ * n_rf);
  for (Eigen::Index s = 0; s < n_s; ++s) {
    for (Eigen::Index r = 0; r < n_rf; ++r) {
      for (int i = 0; i < n_tx_; ++i) bt(s * n_tx_ + i, r * n_tx_ + i) = f_bb_(r, s);
    }
  }
  const auto m = bt.rows();
  const auto n = bt.cols();
  RMat b(2 * m, 2 * n);
  b.topLeftCorner(m, n) = bt.real();
  b.topRightCorner(m, n) = -bt.imag();
  b.bottomLeftCorner(m, n) = bt.imag();
  b.bottomRightCorner(m, n) = bt.real();
  return b;
}

RealStack RealStack::build(const CMat& f_rf, const std::vector<CMat>& f_opt,
                           const std::vector<CMat>& f_bb) {
  if (f_opt.size() != f_bb.size() || f_opt.empty()) {
    throw DimensionError("RealStack: need one digital precoder per subcarrier");
  }
  RealStack s;
  s.n_tx = static_cast<int>(f_rf.rows());
  s.n_rf = static_cast<int>(f_rf.cols());
  s.x = realify(f_rf);
  s.gram = CMat::Zero(s.n_rf, s.n_rf);
  CMat corr = CMat::Zero(s.n_tx, s.n_rf);
  s.z.reserve(f_opt.size());
  s.b.reserve(f_opt.size());
  for (std::size_t k = 0; k < f_opt.size(); ++k) {
    const CMat& fo = f_opt[k];
    const CMat& fb = f_bb[k];
    if (fo.rows() != s.n_tx || fb.rows() != s.n_rf || fb.cols() != fo.cols()) {
      throw DimensionError("RealStack: inconsistent precoder dimensions");
    }
    s.z.push_back(realify(fo));
    s.b.emplace_back(fb, s.n_tx);
    corr.noalias() += fo * fb.adjoint();
    s.gram.noalias() += fb * fb.adjoint();
  }
  s.z_bar = realify(corr);
  return s;
}

RVec RealStack::apply_normal(const RVec& x) const {
  return realify(derealify(x, n_tx, n_rf) * gram);
}

double RealStack::objective(const RVec& x) const {
  double total = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) total += (z[k] - b[k].apply(x)).squaredNorm();
  return total;
}

}  // namespace hbf
