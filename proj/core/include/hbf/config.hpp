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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hbf/complexity.hpp"
#include "hbf/dims.hpp"
#include "hbf/mannet.hpp"

namespace hbf {

// Flat key=value run configuration. Lines starting with '#' are comments; list
// values are comma separated. Unknown keys are rejected.
struct RunConfig {
  SystemDims dims;
  std::vector<double> snr_db = {-10, -5, 0, 5, 10, 15, 20};
  int train_size = 200;
  int test_size = 100;
  TrainConfig train;
  bool auto_t = true;
  std::vector<double> t_candidates = {0.1, 0.25, 0.5, 1.0};
  int i_net = 10;
  std::vector<Scheme> schemes = {Scheme::Dbf,         Scheme::ManNetFc,    Scheme::Omp,
                                 Scheme::SubManNetSc, Scheme::HeuristicSc, Scheme::FixedSc};
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  std::filesystem::path train_data;       // empty: <out>/train.hbfc
  std::filesystem::path test_data;        // empty: <out>/test.hbfc
  std::filesystem::path mannet_model;     // empty: <out>/mannet.mnet
  std::filesystem::path submannet_model;  // empty: <out>/submannet.mnet
  bool record_timing = true;
  unsigned threads = 1;
  std::vector<int> complexity_n_tx = {16, 32, 64, 128};
  std::vector<int> complexity_layers = {4, 5, 6, 7};
  int complexity_subcarriers = 128;

  // Applies one key=value pair. Throws std::invalid_argument on unknown keys or
  // unparsable values.
  void set(std::string_view key, std::string_view value);
  void set(std::string_view assignment);

  void validate() const;

  std::filesystem::path train_path() const;
  std::filesystem::path test_path() const;
  std::filesystem::path mannet_path() const;
  std::filesystem::path submannet_path() const;

  bool wants(Scheme s) const;

  static RunConfig load(const std::filesystem::path& path);
  static RunConfig parse(std::string_view text);
};

}  // namespace hbf
