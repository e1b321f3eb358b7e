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

#include "hbf/types.hpp"

namespace hbf {

// Maximizes sum_i log(1 + gains_i p_i) subject to sum_i p_i = budget, p_i >= 0.
// Streams with zero gain receive no power; if every gain is zero the budget is
// split evenly.
RVec waterfill(const RVec& gains, double budget);

}  // namespace hbf
