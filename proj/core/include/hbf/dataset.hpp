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
#include <vector>

#include "hbf/channel.hpp"

namespace hbf {

// Binary channel dataset, little-endian:
//   "HBFC", u32 version (1), u32 N_t, N_r, K, P, count, f64 f_c, f64 BW,
//   then per realization: P complex gains, P ToAs, aod_az, aod_el, aoa_az,
//   aoa_el (P f64 each), K * N_r * N_t complex values in (k, rx, tx) order.
// Complex values are stored as (re, im) f64 pairs.
inline constexpr char kDatasetMagic[4] = {'H', 'B', 'F', 'C'};
inline constexpr std::uint32_t kDatasetVersion = 1;

void dataset_write(const std::filesystem::path& path, const std::vector<ChannelTensor>& channels);

// `shape` receives the header even when the file holds zero realizations.
std::vector<ChannelTensor> dataset_read(const std::filesystem::path& path,
                                        ChannelShape* shape = nullptr);

}  // namespace hbf
