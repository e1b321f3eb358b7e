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

#include <Eigen/Core>

#include "hbf/types.hpp"

namespace hbf {

// Binary RF-chain/antenna connection matrix (N_t x N_RF): each antenna feeds
// exactly one chain and each chain drives M = N_t / N_RF antennas.
class MappingMatrix {
 public:
  explicit MappingMatrix(Eigen::MatrixXi c);

  // Chain n drives antennas nM .. (n+1)M - 1.
  static MappingMatrix block_diagonal(int n_tx, int n_rf);

  const Eigen::MatrixXi& matrix() const { return c_; }
  int n_tx() const { return static_cast<int>(c_.rows()); }
  int n_rf() const { return static_cast<int>(c_.cols()); }
  int antennas_per_chain() const { return n_tx() / n_rf(); }
  int chain_of(int antenna) const;

  // C (.) F
  CMat apply(const CMat& f) const;
  // realify(C + jC)
  RVec mask_vector() const;

  bool operator==(const MappingMatrix& other) const { return c_ == other.c_; }

 private:
  Eigen::MatrixXi c_;
};

// True when c satisfies the row/column cardinality constraints.
bool is_valid_mapping(const Eigen::MatrixXi& c);

}  // namespace hbf
