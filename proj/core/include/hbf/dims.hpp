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

#include <optional>
#include <utility>

namespace hbf {

// Link dimensions. Antenna arrays are uniform planar arrays with
// n_h * n_v elements; a receive array of two elements is linear (2 x 1).
struct SystemDims {
  int n_tx = 16;
  int n_tx_h = 4;
  int n_tx_v = 4;
  int n_rx = 2;
  int n_rx_h = 2;
  int n_rx_v = 1;
  int n_rf = 2;
  int n_streams = 2;
  int n_subcarriers = 16;
  double center_freq = 300e9;  // Hz
  double bandwidth = 30e9;     // Hz
  int n_paths = 4;
  // Cyclic prefix length in samples; K/4 when unset.
  std::optional<double> cyclic_prefix;

  double cp_length() const { return cyclic_prefix.value_or(n_subcarriers / 4.0); }
  double sampling_period() const { return 1.0 / bandwidth; }
  double max_delay() const { return cp_length() * sampling_period(); }
  int antennas_per_chain() const { return n_tx / n_rf; }

  // Throws DimensionError when any invariant fails.
  void validate() const;

  // Dimensions with the default array factorizations filled in.
  static SystemDims make(int n_tx, int n_rx, int n_rf, int n_streams, int n_subcarriers,
                         int n_paths = 4, double center_freq = 300e9,
                         double bandwidth = 30e9);
};

// (n_h, n_v) with n_v the largest divisor of n not exceeding sqrt(n).
std::pair<int, int> default_factorization(int n);

}  // namespace hbf
