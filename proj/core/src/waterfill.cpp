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

#include "hbf/waterfill.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace hbf {

RVec waterfill(const RVec& gains, double budget) {
  const auto n = gains.size();
  RVec p = RVec::Zero(n);
  if (n == 0) return p;

  std::vector<Eigen::Index> live;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (gains[i] > 0.0) live.push_back(i);
  }
  if (live.empty()) {
    p.setConstant(budget / static_cast<double>(n));
    return p;
  }
  std::stable_sort(live.begin(), live.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return gains[a] > gains[b]; });

  // Largest active set whose weakest stream still sits below the water level.
  double inv_sum = 0.0;
  for (auto i : live) inv_sum += 1.0 / gains[i];
  for (std::size_t active = live.size(); active > 0; --active) {
    const double level = (budget + inv_sum) / static_cast<double>(active);
    const double weakest = 1.0 / gains[live[active - 1]];
    if (level - weakest > 0.0 || active == 1) {
      for (std::size_t j = 0; j < active; ++j) {
        p[live[j]] = std::max(0.0, level - 1.0 / gains[live[j]]);
      }
      break;
    }
    inv_sum -= weakest;
  }
  return p;
}

}  // namespace hbf
