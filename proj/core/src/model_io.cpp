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

#include "hbf/model_io.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "binary_io.hpp"

namespace hbf {

void model_write(const std::filesystem::path& path, const UnfoldedNet& net) {
  net.validate();
  detail::ByteWriter w;
  w.raw(kModelMagic, sizeof kModelMagic);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(net.n_tx));
  w.u32(static_cast<std::uint32_t>(net.n_rf));
  w.u32(static_cast<std::uint32_t>(net.layers()));
  w.f64(net.t);
  for (int l = 0; l < net.layers(); ++l) {
    for (double v : net.w_x[l]) w.f64(v);
    for (double v : net.w_u[l]) w.f64(v);
  }
  detail::write_file(path.string(), w.bytes());
}

UnfoldedNet model_read(const std::filesystem::path& path, std::optional<ModelExpectation> expect) {
  const std::string bytes = detail::read_file(path.string());
  detail::ByteReader r(bytes);
  char magic[4];
  r.raw(magic, sizeof magic);
  if (std::memcmp(magic, kModelMagic, sizeof magic) != 0) throw FormatError("not a model file");
  const auto version = r.u32();
  if (version != kModelVersion) {
    throw FormatError("unsupported model version " + std::to_string(version));
  }
  const auto n_tx = r.u32();
  const auto n_rf = r.u32();
  const auto layers = r.u32();
  const double t = r.f64();
  if (n_tx == 0 || n_rf == 0 || layers < 2 || n_tx > (1u << 20) || n_rf > n_tx || layers > 4096) {
    throw FormatError("invalid model header");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw FormatError("invalid activation parameter");
  const std::uint64_t width = 2ull * n_tx * n_rf;
  const std::uint64_t expected = 2ull * layers * width * sizeof(double);
  if (r.remaining() != expected) {
    std::ostringstream msg;
    msg << "payload length " << r.remaining() << " does not match header (" << expected << ")";
    throw FormatError(msg.str());
  }
  if (expect && (expect->n_tx != static_cast<int>(n_tx) || expect->n_rf != static_cast<int>(n_rf))) {
    std::ostringstream msg;
    msg << "model is " << n_tx << "x" << n_rf << ", expected " << expect->n_tx << "x"
        << expect->n_rf;
    throw DimensionError(msg.str());
  }
  UnfoldedNet net = UnfoldedNet::zeros(static_cast<int>(n_tx), static_cast<int>(n_rf),
                                       static_cast<int>(layers), t);
  for (std::uint32_t l = 0; l < layers; ++l) {
    for (auto& v : net.w_x[l]) v = r.f64();
    for (auto& v : net.w_u[l]) v = r.f64();
  }
  try {
    net.validate();
  } catch (const DimensionError& e) {
    throw FormatError(std::string("corrupt model: ") + e.what());
  }
  return net;
}

}  // namespace hbf
