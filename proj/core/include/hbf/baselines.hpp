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

#include <vector>

#include "hbf/channel.hpp"
#include "hbf/dims.hpp"
#include "hbf/precoding.hpp"

namespace hbf {

// Rate of the fully digital precoder F_opt; upper bound for every hybrid design.
double dbf_se(const ChannelTensor& h, const DigitalOptimal& opt);

// Transmit array responses at f_c for the true departure angles (N_t x P).
CMat genie_codebook(const ChannelTensor& h, int n_tx_h, int n_tx_v);

struct OmpResult : DesignResult {
  std::vector<int> selected;          // codebook columns in selection order
  std::vector<double> residual_norms; // sum_k ||F_res[k]||_F^2 before and after each pick
};

// Wideband orthogonal matching pursuit: picks N_RF atoms maximizing the
// correlation with the residuals summed over subcarriers, refits LS digital
// precoders per pick, and water-fills the final digital stage.
OmpResult omp_hbf(const ChannelTensor& h, const DigitalOptimal& opt, const CMat& codebook,
                  int n_rf);

}  // namespace hbf
