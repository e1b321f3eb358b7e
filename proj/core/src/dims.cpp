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

#include "hbf/dims.hpp"

#include <cmath>
#include <string>

#include "hbf/types.hpp"

namespace hbf {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError("invalid dimensions: " + what);
}

}  // namespace

void SystemDims::validate() const {
  require(n_tx >= 1 && n_rx >= 1, "antenna counts must be positive");
  require(n_streams >= 1, "N_s must be positive");
  require(n_streams <= n_rf && n_rf <= n_tx, "need N_s <= N_RF <= N_t");
  require(n_tx % n_rf == 0, "N_t must be a multiple of N_RF");
  require(n_tx_h >= 1 && n_tx_v >= 1 && n_tx_h * n_tx_v == n_tx, "N_t^h * N_t^v must equal N_t");
  require(n_rx_h >= 1 && n_rx_v >= 1 && n_rx_h * n_rx_v == n_rx, "N_r^h * N_r^v must equal N_r");
  require(n_streams <= n_rx, "N_s must not exceed N_r");
  require(n_subcarriers >= 1, "K must be positive");
  require(n_paths >= 1, "P must be positive");
  require(std::isfinite(bandwidth) && bandwidth > 0.0, "bandwidth must be positive");
  require(std::isfinite(center_freq) && center_freq > 0.0, "center frequency must be positive");
  require(std::isfinite(cp_length()) && cp_length() >= 0.0, "cyclic prefix must be non-negative");
}

std::pair<int, int> default_factorization(int n) {
  if (n < 1) throw DimensionError("array size must be positive");
  int v = 1;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d == 0) v = d;
  }
  return {n / v, v};
}

SystemDims SystemDims::make(int n_tx, int n_rx, int n_rf, int n_streams, int n_subcarriers,
                            int n_paths, double center_freq, double bandwidth) {
  SystemDims d;
  d.n_tx = n_tx;
  d.n_rx = n_rx;
  std::tie(d.n_tx_h, d.n_tx_v) = default_factorization(n_tx);
  std::tie(d.n_rx_h, d.n_rx_v) = default_factorization(n_rx);
  d.n_rf = n_rf;
  d.n_streams = n_streams;
  d.n_subcarriers = n_subcarriers;
  d.n_paths = n_paths;
  d.center_freq = center_freq;
  d.bandwidth = bandwidth;
  d.validate();
  return d;
}

}  // namespace hbf
