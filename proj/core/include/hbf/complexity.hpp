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

#include <string>
#include <string_view>
#include <vector>

namespace hbf {

enum class Scheme {
  Dbf,
  ManNetFc,
  Omp,
  SubManNetSc,
  HeuristicSc,
  FixedSc,
  KstarSc,
};

std::string_view scheme_name(Scheme s);
// Throws std::invalid_argument for unknown names.
Scheme parse_scheme(std::string_view name);
const std::vector<Scheme>& all_schemes();

struct ComplexityParams {
  double n_tx = 16;
  double n_rx = 2;
  double n_rf = 2;
  double n_streams = 2;
  double n_subcarriers = 16;
  double n_paths = 4;
  double layers = 4;
  double i_net = 10;
  double n_candidates = 8;  // |K~| of the heuristic search
};

// Closed-form multiply/add counts:
//   ManNet FC:   (I-1) N_t K N_RF^2 + N_t K N_RF + I (2 K N_RF^2 N_s + L (3 N_t N_RF + 2 K N_RF N_s))
//   heuristic:   ManNet FC + |K~| 2 N_t N_r N_RF
//   fixed/k*:    ManNet FC + 2 N_t N_r N_RF
//   subManNet:   ManNet FC with the layer term L (3 N_t + 2 K N_s)
//   OMP:         N_t K N_RF^2 + 2 N_t P N_s + 4 N_t N_RF^2 + 4 N_t N_RF N_s
//   DBF:         K N_t N_r^2 (one SVD per subcarrier)
double complexity_estimate(Scheme scheme, const ComplexityParams& p);

// Per-layer terms, for comparing the two networks.
double mannet_layer_cost(const ComplexityParams& p);
double submannet_layer_cost(const ComplexityParams& p);

}  // namespace hbf
