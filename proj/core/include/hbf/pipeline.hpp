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
#include <string>
#include <vector>

#include "hbf/config.hpp"

namespace hbf {

inline constexpr const char* kResultsSchema = "# hbf-results v1";
inline constexpr const char* kLossSchema = "# hbf-loss v1";
inline constexpr const char* kComplexitySchema = "# hbf-complexity v1";

struct ResultRow {
  std::string scheme;
  int n_tx = 0;
  int n_rf = 0;
  int n_streams = 0;
  int k_subcarriers = 0;
  double snr_db = 0.0;
  double se_mean = 0.0;
  double se_std = 0.0;
  int n_channels = 0;
  double op_count = 0.0;
  double wall_time_s = 0.0;
};

struct ComplexityRow {
  std::string scheme;
  int n_tx = 0;
  int n_rf = 0;
  int n_streams = 0;
  int k_subcarriers = 0;
  int layers = 0;
  int i_net = 0;
  double op_count = 0.0;
  double layer_cost = 0.0;
};

struct GeneratedData {
  std::filesystem::path train;
  std::filesystem::path test;
};

// Train and test sets drawn from disjoint substreams of the run seed.
GeneratedData cmd_generate_data(const RunConfig& config);

struct TrainedModels {
  std::vector<std::filesystem::path> models;
  std::vector<std::filesystem::path> loss_csvs;
};

// Trains the networks the scheme list needs and writes models plus loss CSVs.
TrainedModels cmd_train(const RunConfig& config);

// Mean/std SE per scheme and SNR over the test set; writes <out>/results.csv.
std::vector<ResultRow> cmd_evaluate(const RunConfig& config);

// Operation counts over the configured N_t grid; writes <out>/complexity.csv.
std::vector<ComplexityRow> cmd_complexity_report(const RunConfig& config);

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
void write_loss_csv(const std::filesystem::path& path, const std::vector<BatchLoss>& history);
void write_complexity_csv(const std::filesystem::path& path,
                          const std::vector<ComplexityRow>& rows);

}  // namespace hbf
