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
#include "hbf/mannet.hpp"
#include "hbf/mapping.hpp"
#include "hbf/precoding.hpp"

namespace hbf {

// Gains between antennas and chains (N_t x N_RF): column n holds |H~[n, m]| for
// the n-th strongest receive row of H[k] (ties to the smaller row index).
RMat antenna_chain_gains(const CMat& h_k, int n_rf);

// Capacity-constrained assignment of antennas to chains maximizing the total
// matched gain. Among equal-gain optima the block-diagonal layout wins.
MappingMatrix assign_antennas(const RMat& gains);

// Row-elimination procedure for two RF chains: per round and chain, disconnect
// the weakest remaining antenna from that chain.
MappingMatrix assign_antennas_two_chain(const RMat& gains);

enum class MappingMode { Optimal, TwoChainElimination };

MappingMatrix dynamic_mapping(const CMat& h_k, int n_rf,
                              MappingMode mode = MappingMode::Optimal);

MappingMatrix fixed_mapping(const SystemDims& dims);

// argmax_k ||H[k]||_F, ties to the smallest index (0-based).
int select_best_subcarrier(const ChannelTensor& h);

// Mapping built from the strongest subcarrier.
MappingMatrix best_subcarrier_mapping(const ChannelTensor& h, int n_rf);

// Odd 1-based subcarriers {1, 3, 5, ..., K-1} as 0-based indices.
std::vector<int> odd_subcarriers(int n_subcarriers);

struct ScDesignResult : DesignResult {
  MappingMatrix mapping = MappingMatrix::block_diagonal(1, 1);
  std::vector<int> candidates;         // subcarriers tried
  std::vector<double> candidate_se;    // SE of each candidate
  int chosen = 0;                      // index into candidates
};

// Masks a fully connected analog precoder with C and water-fills the digital stage.
DesignResult masked_design(const ChannelTensor& h, const CMat& f_full, const MappingMatrix& c,
                           const DigitalOptimal& opt);

// Fully connected network design, then one masked candidate per subcarrier in
// `candidates`; the highest-SE candidate is returned (ties to the earliest).
ScDesignResult heuristic_sc_hbf(const UnfoldedNet& net, const ChannelTensor& h,
                                const DigitalOptimal& opt, int i_net,
                                const std::vector<int>& candidates, Rng& rng);

// Fully connected network design masked with the fixed block-diagonal mapping.
ScDesignResult fixed_sc_hbf(const UnfoldedNet& net, const ChannelTensor& h,
                            const DigitalOptimal& opt, int i_net, Rng& rng);

TrainResult train_submannet(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                            const TrainConfig& config);

// Sub-connected network design with C from the strongest subcarrier.
ScDesignResult sc_hbf_design(const UnfoldedNet& net, const ChannelTensor& h,
                             const DigitalOptimal& opt, int i_net, Rng& rng);

}  // namespace hbf
