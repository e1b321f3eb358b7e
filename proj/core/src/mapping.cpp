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

#include "hbf/mapping.hpp"

#include "hbf/transforms.hpp"

namespace hbf {

bool is_valid_mapping(const Eigen::MatrixXi& c) {
  const auto n_tx = c.rows();
  const auto n_rf = c.cols();
  if (n_tx < 1 || n_rf < 1 || n_tx % n_rf != 0) return false;
  if ((c.array() != 0 && c.array() != 1).any()) return false;
  const auto m = n_tx / n_rf;
  return (c.rowwise().sum().array() == 1).all() && (c.colwise().sum().array() == m).all();
}

MappingMatrix::MappingMatrix(Eigen::MatrixXi c) : c_(std::move(c)) {
  if (!is_valid_mapping(c_)) {
    throw DimensionError("mapping matrix needs one chain per antenna and N_t/N_RF antennas per chain");
  }
}

MappingMatrix MappingMatrix::block_diagonal(int n_tx, int n_rf) {
  if (n_rf < 1 || n_tx < 1 || n_tx % n_rf != 0) {
    throw DimensionError("block-diagonal mapping needs N_t divisible by N_RF");
  }
  const int m = n_tx / n_rf;
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n_tx, n_rf);
  for (int a = 0; a < n_tx; ++a) c(a, a / m) = 1;
  return MappingMatrix(std::move(c));
}

int MappingMatrix::chain_of(int antenna) const {
  Eigen::Index n;
  c_.row(antenna).maxCoeff(&n);
  return static_cast<int>(n);
}

CMat MappingMatrix::apply(const CMat& f) const {
  if (f.rows() != c_.rows() || f.cols() != c_.cols()) {
    throw DimensionError("mapping and analog precoder sizes differ");
  }
  return f.cwiseProduct(c_.cast<cd>());
}

RVec MappingMatrix::mask_vector() const {
  const CMat cc = c_.cast<double>().cast<cd>() * cd(1.0, 1.0);
  return realify(cc);
}

}  // namespace hbf
