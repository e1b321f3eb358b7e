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

#include "hbf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "hbf/types.hpp"

namespace hbf {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("config: invalid value '" + std::string(value) + "' for key '" +
                              std::string(key) + "'");
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) bad_value(key, value);
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) parts.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return parts;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view value) {
  std::vector<T> out;
  for (auto item : split_list(value)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) bad_value(key, value);
  return out;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto as_int = [&] { return parse_number<int>(key, value); };
  auto as_double = [&] { return parse_number<double>(key, value); };

  if (key == "n_tx") {
    dims.n_tx = as_int();
    std::tie(dims.n_tx_h, dims.n_tx_v) = default_factorization(dims.n_tx);
  } else if (key == "n_tx_h") {
    dims.n_tx_h = as_int();
  } else if (key == "n_tx_v") {
    dims.n_tx_v = as_int();
  } else if (key == "n_rx") {
    dims.n_rx = as_int();
    std::tie(dims.n_rx_h, dims.n_rx_v) = default_factorization(dims.n_rx);
  } else if (key == "n_rx_h") {
    dims.n_rx_h = as_int();
  } else if (key == "n_rx_v") {
    dims.n_rx_v = as_int();
  } else if (key == "n_rf") {
    dims.n_rf = as_int();
  } else if (key == "n_streams") {
    dims.n_streams = as_int();
  } else if (key == "k_subcarriers" || key == "n_subcarriers") {
    dims.n_subcarriers = as_int();
  } else if (key == "n_paths") {
    dims.n_paths = as_int();
  } else if (key == "center_freq") {
    dims.center_freq = as_double();
  } else if (key == "bandwidth") {
    dims.bandwidth = as_double();
  } else if (key == "cyclic_prefix") {
    dims.cyclic_prefix = as_double();
  } else if (key == "snr_db") {
    snr_db = parse_list<double>(key, value);
  } else if (key == "train_size") {
    train_size = as_int();
  } else if (key == "test_size") {
    test_size = as_int();
  } else if (key == "layers") {
    train.layers = as_int();
  } else if (key == "t") {
    if (value == "auto") {
      auto_t = true;
    } else {
      auto_t = false;
      train.t = as_double();
    }
  } else if (key == "t_candidates") {
    t_candidates = parse_list<double>(key, value);
  } else if (key == "epochs") {
    train.epochs = as_int();
  } else if (key == "batch_size") {
    train.batch_size = as_int();
  } else if (key == "inner_iters") {
    train.inner_iters = as_int();
  } else if (key == "train_snr_db") {
    train.train_snr_db = as_double();
  } else if (key == "learning_rate") {
    train.adam.learning_rate = as_double();
  } else if (key == "i_net") {
    i_net = as_int();
  } else if (key == "schemes") {
    schemes.clear();
    for (auto item : split_list(value)) schemes.push_back(parse_scheme(item));
    if (schemes.empty()) bad_value(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out_dir") {
    out_dir = std::string(value);
  } else if (key == "train_data") {
    train_data = std::string(value);
  } else if (key == "test_data") {
    test_data = std::string(value);
  } else if (key == "mannet_model") {
    mannet_model = std::string(value);
  } else if (key == "submannet_model") {
    submannet_model = std::string(value);
  } else if (key == "record_timing") {
    record_timing = parse_bool(key, value);
  } else if (key == "threads") {
    threads = parse_number<unsigned>(key, value);
  } else if (key == "complexity_n_tx") {
    complexity_n_tx = parse_list<int>(key, value);
  } else if (key == "complexity_layers") {
    complexity_layers = parse_list<int>(key, value);
  } else if (key == "complexity_subcarriers") {
    complexity_subcarriers = as_int();
  } else {
    throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  }
}

void RunConfig::set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("config: expected key=value, got '" + std::string(assignment) + "'");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void RunConfig::validate() const {
  dims.validate();
  train.validate();
  if (snr_db.empty()) throw std::invalid_argument("config: snr_db must not be empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw std::invalid_argument("config: snr_db values must be finite");
  }
  if (train_size < 1 || test_size < 1) throw std::invalid_argument("config: dataset sizes must be >= 1");
  if (i_net < 1) throw std::invalid_argument("config: i_net must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("config: scheme list must not be empty");
  if (auto_t) {
    if (t_candidates.empty()) throw std::invalid_argument("config: t_candidates must not be empty");
    for (double t : t_candidates) {
      if (!(t > 0.0)) throw std::invalid_argument("config: t candidates must be > 0");
    }
  }
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (complexity_n_tx.empty()) throw std::invalid_argument("config: complexity_n_tx is empty");
  if (complexity_layers.size() != 1 && complexity_layers.size() != complexity_n_tx.size()) {
    throw std::invalid_argument("config: complexity_layers needs one entry or one per N_t");
  }
  for (int n : complexity_n_tx) {
    if (n < 1 || n % dims.n_rf != 0) {
      throw std::invalid_argument("config: complexity N_t values must be multiples of N_RF");
    }
  }
  for (int l : complexity_layers) {
    if (l < 1) throw std::invalid_argument("config: complexity layers must be >= 1");
  }
  if (complexity_subcarriers < 1) throw std::invalid_argument("config: complexity_subcarriers must be >= 1");
}

std::filesystem::path RunConfig::train_path() const {
  return train_data.empty() ? out_dir / "train.hbfc" : train_data;
}
std::filesystem::path RunConfig::test_path() const {
  return test_data.empty() ? out_dir / "test.hbfc" : test_data;
}
std::filesystem::path RunConfig::mannet_path() const {
  return mannet_model.empty() ? out_dir / "mannet.mnet" : mannet_model;
}
std::filesystem::path RunConfig::submannet_path() const {
  return submannet_model.empty() ? out_dir / "submannet.mnet" : submannet_model;
}

bool RunConfig::wants(Scheme s) const {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    try {
      cfg.set(line);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace hbf
