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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hbf/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key=value configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--set", f.sets, "override one key (key=value), repeatable");
}

hbf::RunConfig resolve(const CLI::App* cmd, const CommonFlags& f) {
  hbf::RunConfig cfg = f.config.empty() ? hbf::RunConfig{} : hbf::RunConfig::load(f.config);
  for (const auto& s : f.sets) cfg.set(s);
  if (cmd->count("--seed") > 0) cfg.seed = f.seed;
  if (!f.out.empty()) cfg.out_dir = f.out;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep-unfolded hybrid beamforming for wideband mmWave/THz MIMO-OFDM"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* gen = app.add_subcommand("generate-data", "draw train/test channel sets");
  auto* train = app.add_subcommand("train", "train ManNet and/or subManNet");
  auto* eval = app.add_subcommand("evaluate", "SE of every scheme over the SNR grid");
  auto* cplx = app.add_subcommand("complexity-report", "operation counts over the N_t grid");
  for (auto* c : {gen, train, eval, cplx}) add_common(c, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto out = hbf::cmd_generate_data(resolve(gen, flags));
      std::cout << "train: " << out.train.string() << "\ntest:  " << out.test.string() << '\n';
    } else if (train->parsed()) {
      const auto out = hbf::cmd_train(resolve(train, flags));
      for (const auto& m : out.models) std::cout << "model: " << m.string() << '\n';
      for (const auto& l : out.loss_csvs) std::cout << "loss:  " << l.string() << '\n';
    } else if (eval->parsed()) {
      const auto cfg = resolve(eval, flags);
      const auto rows = hbf::cmd_evaluate(cfg);
      for (const auto& r : rows) {
        std::cout << r.scheme << " snr=" << r.snr_db << " dB  se=" << r.se_mean << " +- "
                  << r.se_std << '\n';
      }
      std::cout << "results: " << (cfg.out_dir / "results.csv").string() << '\n';
    } else if (cplx->parsed()) {
      const auto cfg = resolve(cplx, flags);
      hbf::cmd_complexity_report(cfg);
      std::cout << "complexity: " << (cfg.out_dir / "complexity.csv").string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
