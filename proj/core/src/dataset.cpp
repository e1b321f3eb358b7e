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

#include "hbf/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "binary_io.hpp"

namespace hbf {

namespace detail {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

namespace {

std::size_t realization_bytes(const ChannelShape& s) {
  const auto p = static_cast<std::size_t>(s.n_paths);
  const auto entries = static_cast<std::size_t>(s.n_subcarriers) * s.n_rx * s.n_tx;
  return p * 16 + p * 8 + 4 * p * 8 + entries * 16;
}

}  // namespace

void dataset_write(const std::filesystem::path& path, const std::vector<ChannelTensor>& channels) {
  ChannelShape shape{};
  if (!channels.empty()) shape = channels.front().shape;
  for (const auto& c : channels) {
    if (!(c.shape == shape)) throw DimensionError("dataset realizations must share dimensions");
    if (c.n_subcarriers() != shape.n_subcarriers || c.paths.size() != shape.n_paths) {
      throw DimensionError("realization payload does not match its shape");
    }
  }

  detail::ByteWriter w;
  w.raw(kDatasetMagic, 4);
  w.u32(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(shape.n_tx));
  w.u32(static_cast<std::uint32_t>(shape.n_rx));
  w.u32(static_cast<std::uint32_t>(shape.n_subcarriers));
  w.u32(static_cast<std::uint32_t>(shape.n_paths));
  w.u32(static_cast<std::uint32_t>(channels.size()));
  w.f64(shape.center_freq);
  w.f64(shape.bandwidth);
  for (const auto& c : channels) {
    for (const cd g : c.paths.gains) w.c128(g);
    for (const auto* arr : {&c.paths.toas, &c.paths.aod_az, &c.paths.aod_el, &c.paths.aoa_az,
                            &c.paths.aoa_el}) {
      for (const double v : *arr) w.f64(v);
    }
    for (const CMat& hk : c.h) {
      for (Eigen::Index r = 0; r < hk.rows(); ++r) {
        for (Eigen::Index t = 0; t < hk.cols(); ++t) w.c128(hk(r, t));
      }
    }
  }
  detail::write_file(path.string(), w.bytes());
}

std::vector<ChannelTensor> dataset_read(const std::filesystem::path& path, ChannelShape* shape_out) {
  const std::string bytes = detail::read_file(path.string());
  detail::ByteReader r(bytes);
  char magic[4];
  r.raw(magic, 4);
  if (std::string_view(magic, 4) != std::string_view(kDatasetMagic, 4)) {
    throw FormatError("not a channel dataset (bad magic)");
  }
  if (const auto v = r.u32(); v != kDatasetVersion) {
    throw FormatError("unsupported dataset version " + std::to_string(v));
  }
  ChannelShape shape;
  shape.n_tx = static_cast<int>(r.u32());
  shape.n_rx = static_cast<int>(r.u32());
  shape.n_subcarriers = static_cast<int>(r.u32());
  shape.n_paths = static_cast<int>(r.u32());
  const std::uint32_t count = r.u32();
  shape.center_freq = r.f64();
  shape.bandwidth = r.f64();

  if (count > 0 && (shape.n_tx < 1 || shape.n_rx < 1 || shape.n_subcarriers < 1 ||
                    shape.n_paths < 1)) {
    throw FormatError("dataset header has empty dimensions");
  }
  const std::size_t expected = static_cast<std::size_t>(count) * realization_bytes(shape);
  if (r.remaining() != expected) {
    throw FormatError("payload length " + std::to_string(r.remaining()) +
                      " does not match header (expected " + std::to_string(expected) + ")");
  }

  std::vector<ChannelTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    ChannelTensor c;
    c.shape = shape;
    const auto p = static_cast<std::size_t>(shape.n_paths);
    c.paths.gains.resize(p);
    for (auto& g : c.paths.gains) g = r.c128();
    for (auto* arr : {&c.paths.toas, &c.paths.aod_az, &c.paths.aod_el, &c.paths.aoa_az,
                      &c.paths.aoa_el}) {
      arr->resize(p);
      for (auto& v : *arr) v = r.f64();
    }
    c.h.reserve(static_cast<std::size_t>(shape.n_subcarriers));
    for (int k = 0; k < shape.n_subcarriers; ++k) {
      CMat hk(shape.n_rx, shape.n_tx);
      for (int row = 0; row < shape.n_rx; ++row) {
        for (int t = 0; t < shape.n_tx; ++t) hk(row, t) = r.c128();
      }
      c.h.push_back(std::move(hk));
    }
    out.push_back(std::move(c));
  }
  if (shape_out) *shape_out = shape;
  return out;
}

}  // namespace hbf
