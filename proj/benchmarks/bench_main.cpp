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

#include <benchmark/benchmark.h>

#include "hbf/baselines.hpp"
#include "hbf/subnet.hpp"

using namespace hbf;

namespace {

SystemDims dims_for(int n_tx) { return SystemDims::make(n_tx, 2, 2, 2, 16); }

void BM_ChannelGeneration(benchmark::State& state) {
  const auto dims = dims_for(static_cast<int>(state.range(0)));
  Rng rng = make_rng(1, Stream::TestChannels);
  for (auto _ : state) benchmark::DoNotOptimize(generate_channel(dims, rng));
}
BENCHMARK(BM_ChannelGeneration)->Arg(16)->Arg(64)->Arg(128);

void BM_ForwardPass(benchmark::State& state) {
  const int n_tx = static_cast<int>(state.range(0));
  const auto dims = dims_for(n_tx);
  Rng rng = make_rng(1, Stream::TestChannels);
  const auto h = generate_channel(dims, rng);
  const auto opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
  const CMat f_rf = random_analog_precoder(n_tx, 2, rng);
  const RealStack st = RealStack::build(f_rf, opt.f_opt, ls_digital(f_rf, opt.f_opt));
  const UnfoldedNet net = UnfoldedNet::random(n_tx, 2, 4, 0.5, rng);
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, st));
}
BENCHMARK(BM_ForwardPass)->Arg(16)->Arg(32)->Arg(64)->Arg(128);

void BM_TrainEpoch(benchmark::State& state) {
  const auto dims = dims_for(16);
  const auto data = generate_channels(dims, 1, Stream::TrainChannels, 40);
  TrainConfig cfg;
  cfg.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_mannet(data, dims, cfg));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

struct DesignFixture {
  ChannelTensor h;
  DigitalOptimal opt;
  UnfoldedNet net = UnfoldedNet::zeros(2, 1, 2, 0.5);
  explicit DesignFixture(int n_tx) {
    Rng rng = make_rng(1, Stream::TestChannels);
    h = generate_channel(dims_for(n_tx), rng);
    opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
    net = UnfoldedNet::random(n_tx, 2, 4, 0.5, rng);
  }
};

void BM_FcDesign(benchmark::State& state) {
  const DesignFixture f(static_cast<int>(state.range(0)));
  Rng rng = make_rng(1, Stream::Design);
  for (auto _ : state) benchmark::DoNotOptimize(fc_hbf_design(f.net, f.h, f.opt, 10, rng));
}
BENCHMARK(BM_FcDesign)->Arg(16)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_HeuristicScDesign(benchmark::State& state) {
  const DesignFixture f(static_cast<int>(state.range(0)));
  Rng rng = make_rng(1, Stream::Design);
  const auto cand = odd_subcarriers(16);
  for (auto _ : state) benchmark::DoNotOptimize(heuristic_sc_hbf(f.net, f.h, f.opt, 10, cand, rng));
}
BENCHMARK(BM_HeuristicScDesign)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_Omp(benchmark::State& state) {
  const DesignFixture f(static_cast<int>(state.range(0)));
  const CMat cb = genie_codebook(f.h, dims_for(static_cast<int>(state.range(0))).n_tx_h,
                                 dims_for(static_cast<int>(state.range(0))).n_tx_v);
  for (auto _ : state) benchmark::DoNotOptimize(omp_hbf(f.h, f.opt, cb, 2));
}
BENCHMARK(BM_Omp)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
