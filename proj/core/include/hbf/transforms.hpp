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

#pragma once

#include <vector>

#include "hbf/types.hpp"

namespace hbf {

// Column-major vectorization with real parts stacked above imaginary parts.
RVec realify(const CMat& f);
CMat derealify(const RVec& x, int rows, int cols);

// Real form of (F_BB^T kron I_{N_t}) acting on realify(F_RF). Stored as the
// N_RF x N_s coefficient matrix; every product costs O(N_t N_RF N_s).
class StackedKron {
 public:
  StackedKron(CMat f_bb, int n_tx);

  int rows() const { return 2 * n_tx_ * static_cast<int>(f_bb_.cols()); }
  int cols() const { return 2 * n_tx_ * static_cast<int>(f_bb_.rows()); }
  int n_tx() const { return n_tx_; }
  const CMat& coefficients() const { return f_bb_; }

  RVec apply(const RVec& x) const;            // B x
  RVec apply_transpose(const RVec& z) const;  // B^T z
  RVec apply_normal(const RVec& x) const;     // B^T B x

  // Explicit matrix; only for verification.
  RMat dense() const;

 private:
  CMat f_bb_;
  int n_tx_;
};

// Least-squares stack of one channel realization for fixed digital precoders:
// x, z[k], B[k], together with z_bar = sum_k B[k]^T z[k] and the coefficient Gram
// G = sum_k F_BB[k] F_BB[k]^H which gives sum_k B[k]^T B[k] x = realify(F G).
struct RealStack {
  int n_tx = 0;
  int n_rf = 0;
  RVec x;
  std::vector<RVec> z;
  std::vector<StackedKron> b;
  RVec z_bar;
  CMat gram;

  static RealStack build(const CMat& f_rf, const std::vector<CMat>& f_opt,
                         const std::vector<CMat>& f_bb);

  int n_subcarriers() const { return static_cast<int>(b.size()); }
  int width() const { return 2 * n_tx * n_rf; }

  // sum_k B[k]^T B[k] x
  RVec apply_normal(const RVec& x) const;
  // sum_k ||z[k] - B[k] x||^2
  double objective(const RVec& x) const;
};

}  // namespace hbf
