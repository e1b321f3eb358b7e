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
#include "hbf/mapping.hpp"
#include "hbf/types.hpp"

namespace hbf {

struct PrecoderPair {
  CMat f_rf;                // N_t x N_RF, frequency flat
  std::vector<CMat> f_bb;   // K matrices, each N_RF x N_s
};

struct DesignResult {
  PrecoderPair precoders;
  double se = 0.0;  // bits/s/Hz
};

inline constexpr double kPinvCutoff = 1e-12;
inline constexpr double kMaxGramCondition = 1e12;

// sum_k ||F_opt[k] - F_RF F_BB[k]||_F^2
double residual_objective(const std::vector<CMat>& f_opt, const CMat& f_rf,
                          const std::vector<CMat>& f_bb);

// Minimum-norm pseudo-inverse; singular values below cutoff * sigma_max are dropped.
CMat pseudo_inverse(const CMat& a, double rel_cutoff = kPinvCutoff);

// F_BB[k] = F_RF^+ F_opt[k]
CMat ls_digital(const CMat& f_rf, const CMat& f_opt_k);
std::vector<CMat> ls_digital(const CMat& f_rf, const std::vector<CMat>& f_opt);

// Rate-maximizing digital precoder for a fixed analog stage:
// F_BB = Q^{-1/2} U diag(sqrt(p)), Q = F_RF^H F_RF, U the top-N_s right singular
// vectors of H F_RF Q^{-1/2}, p water-filled with budget N_s. Throws
// ConditioningError when cond(Q) exceeds kMaxGramCondition.
CMat waterfilling_digital(const CMat& h_k, const CMat& f_rf, double rho, double noise_var,
                          int n_streams);
std::vector<CMat> waterfilling_digital(const ChannelTensor& h, const CMat& f_rf, double rho,
                                       double noise_var, int n_streams);

// Entry-wise e^{j arg(.)}; a zero entry maps to 1.
CMat unit_modulus_project(const CMat& f);
CMat unit_modulus_project(const RVec& x, int n_tx, int n_rf);
// C (.) e^{j arg(.)}
CMat unit_modulus_project(const RVec& x, const MappingMatrix& c);

// Average per-subcarrier rate with the optimal combiner (top-N_s left singular
// vectors of H[k] F_RF F_BB[k]).
double spectral_efficiency(const ChannelTensor& h, const CMat& f_rf,
                           const std::vector<CMat>& f_bb, double rho, double noise_var);
// Same with per-subcarrier effective precoders F[k] (N_t x N_s).
double spectral_efficiency(const ChannelTensor& h, const std::vector<CMat>& f_eff, double rho,
                           double noise_var);

// (1/K) sum_k log2 det(I + rho/(sigma^2 N_s) H (C.F) (C.F)^H H^H)
double analog_se(const ChannelTensor& h, const Eigen::MatrixXi& c, const CMat& f_rf, double rho,
                 double noise_var, int n_streams);
double analog_se(const ChannelTensor& h, const MappingMatrix& c, const CMat& f_rf, double rho,
                 double noise_var, int n_streams);

// Analog stage of unit-modulus entries with phases uniform on [0, 2pi).
CMat random_analog_precoder(int n_tx, int n_rf, Rng& rng);

}  // namespace hbf
