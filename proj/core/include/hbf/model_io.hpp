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

#include <filesystem>
#include <optional>

#include "hbf/mannet.hpp"

namespace hbf {

// Binary model file, little-endian: "MNET", u32 version (1), u32 N_t, N_RF, L,
// f64 t, then L x 2 weight vectors of 2 N_t N_RF f64 values (layer-major, w_x
// before w_u).
inline constexpr char kModelMagic[4] = {'M', 'N', 'E', 'T'};
inline constexpr std::uint32_t kModelVersion = 1;

void model_write(const std::filesystem::path& path, const UnfoldedNet& net);

struct ModelExpectation {
  int n_tx = 0;
  int n_rf = 0;
};

// Throws FormatError on a bad header or payload and DimensionError when the
// stored dimensions differ from `expect`.
UnfoldedNet model_read(const std::filesystem::path& path,
                       std::optional<ModelExpectation> expect = std::nullopt);

}  // namespace hbf
