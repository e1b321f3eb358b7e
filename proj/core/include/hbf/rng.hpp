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

#include <cstdint>
#include <random>

namespace hbf {

using Rng = std::mt19937_64;

// Substream tags. Each (seed, tag, index) triple maps to an independent
// generator, so results do not depend on evaluation order.
enum class Stream : std::uint64_t {
  TrainChannels = 1,
  TestChannels = 2,
  Training = 3,
  Design = 4,
  Validation = 5,
};

Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

}  // namespace hbf
