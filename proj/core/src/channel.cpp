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

#include "hbf/channel.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "hbf/waterfill.hpp"

namespace hbf {

ChannelShape shape_of(const SystemDims& dims) {
  return ChannelShape{dims.n_tx,    dims.n_rx,        dims.n_subcarriers,
                      dims.n_paths, dims.center_freq, dims.bandwidth};
}

std::vector<double> subcarrier_frequencies(int n_subcarriers, double center_freq,
                                           double bandwidth) {
  if (n_subcarriers < 1) throw DimensionError("K must be positive");
  std::vector<double> f(static_cast<std::size_t>(n_subcarriers));
  const double k_total = n_subcarriers;
  for (int k = 1; k <= n_subcarriers; ++k) {
    f[static_cast<std::size_t>(k - 1)] =
        center_freq + bandwidth * (2.0 * k - 1.0 - k_total) / (2.0 * k_total);
  }
  return f;
}

CVec array_response(int n_h, int n_v, double az, double el, double f, double center_freq) {
  if (n_h < 1 || n_v < 1) throw DimensionError("array dimensions must be positive");
  const double scale = std::numbers::pi * f / center_freq;
  const double horizontal = std::sin(az) * std::sin(el);
  const double vertical = std::cos(el);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_h) * n_v);
  CVec a(n_h * n_v);
  for (int iv = 0; iv < n_v; ++iv) {
    for (int ih = 0; ih < n_h; ++ih) {
      a[iv * n_h + ih] = std::polar(amp, scale * (ih * horizontal + iv * vertical));
    }
  }
  return a;
}

ChannelTensor synthesize_channel(const SystemDims& dims, PathSet paths) {
  dims.validate();
  const int p_count = paths.size();
  if (p_count < 1 || static_cast<int>(paths.toas.size()) != p_count ||
      static_cast<int>(paths.aod_az.size()) != p_count ||
      static_cast<int>(paths.aod_el.size()) != p_count ||
      static_cast<int>(paths.aoa_az.size()) != p_count ||
      static_cast<int>(paths.aoa_el.size()) != p_count) {
    throw DimensionError("path arrays must share one positive length");
  }

  ChannelTensor out;
  out.shape = shape_of(dims);
  out.shape.n_paths = p_count;
  const double xi = std::sqrt(static_cast<double>(dims.n_rx) * dims.n_tx / p_count);
  const auto freqs = subcarrier_frequencies(dims.n_subcarriers, dims.center_freq, dims.bandwidth);
  out.h.reserve(freqs.size());
  for (double fk : freqs) {
    CMat hk = CMat::Zero(dims.n_rx, dims.n_tx);
    for (int p = 0; p < p_count; ++p) {
      const CVec ar = array_response(dims.n_rx_h, dims.n_rx_v, paths.aoa_az[p], paths.aoa_el[p],
                                     fk, dims.center_freq);
      const CVec at = array_response(dims.n_tx_h, dims.n_tx_v, paths.aod_az[p], paths.aod_el[p],
                                     fk, dims.center_freq);
      const cd delay = std::polar(1.0, -2.0 * std::numbers::pi * paths.toas[p] * fk);
      hk.noalias() += (xi * paths.gains[p] * delay) * ar * at.adjoint();
    }
    out.h.push_back(std::move(hk));
  }
  out.paths = std::move(paths);
  return out;
}

ChannelTensor generate_channel(const SystemDims& dims, Rng& rng) {
  dims.validate();
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> toa(0.0, dims.max_delay());
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> elevation(-std::numbers::pi / 2, std::numbers::pi / 2);

  PathSet paths;
  for (int p = 0; p < dims.n_paths; ++p) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    paths.gains.emplace_back(re, im);
    paths.toas.push_back(toa(rng));
    paths.aod_az.push_back(azimuth(rng));
    paths.aod_el.push_back(elevation(rng));
    paths.aoa_az.push_back(azimuth(rng));
    paths.aoa_el.push_back(elevation(rng));
  }
  return synthesize_channel(dims, std::move(paths));
}

std::vector<ChannelTensor> generate_channels(const SystemDims& dims, std::uint64_t seed,
                                             Stream stream, int count,
                                             std::uint64_t first_index, unsigned threads) {
  dims.validate();
  if (count < 0) throw DimensionError("negative realization count");
  std::vector<ChannelTensor> out(static_cast<std::size_t>(count));
  auto work = [&](unsigned worker, unsigned n_workers) {
    for (int i = static_cast<int>(worker); i < count; i += static_cast<int>(n_workers)) {
      Rng rng = make_rng(seed, stream, first_index + static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = generate_channel(dims, rng);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  return out;
}

DigitalOptimal optimal_digital_precoder(const ChannelTensor& h, double rho, double noise_var,
                                        int n_streams) {
  if (h.h.empty()) throw DimensionError("channel has no subcarriers");
  const auto rows = h.h.front().rows();
  const auto cols = h.h.front().cols();
  if (n_streams < 1 || n_streams > std::min(rows, cols)) {
    throw DimensionError("N_s must lie in [1, min(N_r, N_t)]");
  }
  DigitalOptimal out;
  out.rho = rho;
  out.noise_var = noise_var;
  const double snr = rho / (noise_var * n_streams);
  out.f_opt.reserve(h.h.size());
  for (const CMat& hk : h.h) {
    Eigen::JacobiSVD<CMat> svd(hk, Eigen::ComputeThinV);
    RVec gains = snr * svd.singularValues().head(n_streams).array().square().matrix();
    const RVec p = waterfill(gains, static_cast<double>(n_streams));
    out.f_opt.push_back(svd.matrixV().leftCols(n_streams) *
                        p.cwiseSqrt().cast<cd>().asDiagonal());
  }
  return out;
}

}  // namespace hbf
