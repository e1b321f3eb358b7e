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
#include <vector>

#include "hbf/dims.hpp"
#include "hbf/rng.hpp"
#include "hbf/types.hpp"

namespace hbf {

// Per-path parameters of one realization. Angles in radians, delays in seconds.
struct PathSet {
  std::vector<cd> gains;
  std::vector<double> toas;
  std::vector<double> aod_az;
  std::vector<double> aod_el;
  std::vector<double> aoa_az;
  std::vector<double> aoa_el;

  int size() const { return static_cast<int>(gains.size()); }
  bool operator==(const PathSet&) const = default;
};

// Geometry a channel file records about each realization.
struct ChannelShape {
  int n_tx = 0;
  int n_rx = 0;
  int n_subcarriers = 0;
  int n_paths = 0;
  double center_freq = 0.0;
  double bandwidth = 0.0;

  bool operator==(const ChannelShape&) const = default;
};

ChannelShape shape_of(const SystemDims& dims);

struct ChannelTensor {
  ChannelShape shape;
  PathSet paths;
  std::vector<CMat> h;  // K matrices, each n_rx x n_tx

  int n_subcarriers() const { return static_cast<int>(h.size()); }
  bool operator==(const ChannelTensor&) const = default;
};

// f_k = f_c + BW (2k - 1 - K) / (2K), k = 1..K.
std::vector<double> subcarrier_frequencies(int n_subcarriers, double center_freq,
                                           double bandwidth);

// Half-wavelength UPA steering vector at frequency f; element (i_h, i_v) sits at
// index i_v * n_h + i_h. Unit norm.
CVec array_response(int n_h, int n_v, double az, double el, double f, double center_freq);

// Builds H[k] for every subcarrier from explicit path parameters.
ChannelTensor synthesize_channel(const SystemDims& dims, PathSet paths);

// Draws one wideband realization: CN(0,1) gains, U[0, tau_max] delays,
// azimuths U[0, 2pi), elevations U[-pi/2, pi/2].
ChannelTensor generate_channel(const SystemDims& dims, Rng& rng);

// Realization i uses the substream (seed, stream, first_index + i).
std::vector<ChannelTensor> generate_channels(const SystemDims& dims, std::uint64_t seed,
                                             Stream stream, int count,
                                             std::uint64_t first_index = 0,
                                             unsigned threads = 1);

struct DigitalOptimal {
  std::vector<CMat> f_opt;  // K matrices, each n_tx x n_streams
  double rho = 1.0;
  double noise_var = 1.0;
};

// Top-N_s right singular vectors of each H[k] with water-filled column powers
// (per-subcarrier budget N_s).
DigitalOptimal optimal_digital_precoder(const ChannelTensor& h, double rho, double noise_var,
                                        int n_streams);

}  // namespace hbf
