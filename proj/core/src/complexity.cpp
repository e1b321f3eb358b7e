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

#include "hbf/complexity.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace hbf {

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 7> kNames{{
    {Scheme::Dbf, "dbf"},
    {Scheme::ManNetFc, "mannet-fc"},
    {Scheme::Omp, "omp"},
    {Scheme::SubManNetSc, "submannet-sc"},
    {Scheme::HeuristicSc, "heuristic-sc"},
    {Scheme::FixedSc, "fixed-sc"},
    {Scheme::KstarSc, "kstar-sc"},
}};

// Network-independent part of the FC design plus I_net times the per-iteration stacking.
double design_overhead(const ComplexityParams& p) {
  return (p.i_net - 1) * p.n_tx * p.n_subcarriers * p.n_rf * p.n_rf +
         p.n_tx * p.n_subcarriers * p.n_rf +
         p.i_net * 2 * p.n_subcarriers * p.n_rf * p.n_rf * p.n_streams;
}

}  // namespace

std::string_view scheme_name(Scheme s) {
  for (const auto& [scheme, name] : kNames) {
    if (scheme == s) return name;
  }
  throw std::invalid_argument("unknown scheme");
}

Scheme parse_scheme(std::string_view name) {
  for (const auto& [scheme, n] : kNames) {
    if (n == name) return scheme;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> schemes = [] {
    std::vector<Scheme> v;
    for (const auto& entry : kNames) v.push_back(entry.first);
    return v;
  }();
  return schemes;
}

double mannet_layer_cost(const ComplexityParams& p) {
  return 3 * p.n_tx * p.n_rf + 2 * p.n_subcarriers * p.n_rf * p.n_streams;
}

double submannet_layer_cost(const ComplexityParams& p) {
  return 3 * p.n_tx + 2 * p.n_subcarriers * p.n_streams;
}

double complexity_estimate(Scheme scheme, const ComplexityParams& p) {
  const double fc = design_overhead(p) + p.i_net * p.layers * mannet_layer_cost(p);
  const double mapping = 2 * p.n_tx * p.n_rx * p.n_rf;
  switch (scheme) {
    case Scheme::ManNetFc:
      return fc;
    case Scheme::HeuristicSc:
      return fc + p.n_candidates * mapping;
    case Scheme::FixedSc:
    case Scheme::KstarSc:
      return fc + mapping;
    case Scheme::SubManNetSc:
      return design_overhead(p) + p.i_net * p.layers * submannet_layer_cost(p);
    case Scheme::Omp:
      return p.n_tx * p.n_subcarriers * p.n_rf * p.n_rf + 2 * p.n_tx * p.n_paths * p.n_streams +
             4 * p.n_tx * p.n_rf * p.n_rf + 4 * p.n_tx * p.n_rf * p.n_streams;
    case Scheme::Dbf:
      return p.n_subcarriers * p.n_tx * p.n_rx * p.n_rx;
  }
  throw std::invalid_argument("unknown scheme");
}

}  // namespace hbf
