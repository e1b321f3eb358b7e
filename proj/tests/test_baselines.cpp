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

#include <doctest.h>

#include <numeric>

#include "hbf/baselines.hpp"
#include "hbf/complexity.hpp"
#include "hbf/subnet.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace {

ChannelTensor channel(std::uint64_t seed, const SystemDims& dims) {
  Rng g = make_rng(seed, Stream::TestChannels);
  return generate_channel(dims, g);
}

}  // namespace

TEST_CASE("fully digital reference") {
  const auto dims = SystemDims::make(16, 4, 4, 2, 8);
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const auto h = channel(s, dims);
    const auto opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
    const double dbf = dbf_se(h, opt);
    // Eigen-based oracle: sum over subcarriers of log2 det(I + snr H F F^H H^H).
    double acc = 0;
    for (int k = 0; k < 8; ++k) {
      const CMat hf = h.h[k] * opt.f_opt[k];
      acc += oracle::log2det_eig(10.0 / 2.0 * hf * hf.adjoint());
    }
    CHECK(dbf == doctest::Approx(acc / 8).epsilon(1e-10));

    Rng r = make_rng(s, Stream::Design);
    const CMat f_rf = random_analog_precoder(16, 4, r);
    const auto f_bb = waterfilling_digital(h, f_rf, 10.0, 1.0, 2);
    CHECK(spectral_efficiency(h, f_rf, f_bb, 10.0, 1.0) <= dbf + 1e-9);
    const auto omp = omp_hbf(h, opt, genie_codebook(h, 4, 4), 4);
    CHECK(omp.se <= dbf + 1e-9);
  }
  const auto h = channel(1, dims);
  const auto opt0 = optimal_digital_precoder(h, 0.0, 1.0, 2);
  CHECK(dbf_se(h, opt0) == 0.0);

  // Rank-one channel with a single stream: DBF = log2(1 + snr ||h||^2).
  const auto d1 = SystemDims::make(8, 1, 1, 1, 2);
  const auto h1 = channel(3, d1);
  const auto o1 = optimal_digital_precoder(h1, 5.0, 1.0, 1);
  double r1 = 0;
  for (const auto& hk : h1.h) r1 += std::log2(1.0 + 5.0 * hk.squaredNorm());
  CHECK(dbf_se(h1, o1) == doctest::Approx(r1 / 2).epsilon(1e-10));
}

TEST_CASE("OMP baseline") {
  const auto dims = SystemDims::make(16, 4, 4, 2, 8);
  const auto h = channel(4, dims);
  const auto opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
  const CMat cb = genie_codebook(h, 4, 4);
  REQUIRE(cb.cols() == static_cast<Eigen::Index>(h.paths.size()));
  for (Eigen::Index j = 0; j < cb.cols(); ++j) CHECK(cb.col(j).norm() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("residual never increases") {
    const auto r = omp_hbf(h, opt, cb, 2);
    REQUIRE(r.residual_norms.size() == 3);
    for (std::size_t i = 1; i < r.residual_norms.size(); ++i) {
      CHECK(r.residual_norms[i] <= r.residual_norms[i - 1] + 1e-12);
    }
    CHECK(r.residual_norms[0] == doctest::Approx(residual_objective(opt.f_opt, CMat::Zero(16, 2),
                                                                    std::vector<CMat>(8, CMat::Zero(2, 2)))));
    CHECK((r.precoders.f_rf.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("codebook size equal to N_RF selects every atom") {
    const CMat small = cb.leftCols(4);
    const auto r = omp_hbf(h, opt, small, 4);
    std::vector<int> sel = r.selected;
    std::sort(sel.begin(), sel.end());
    CHECK(sel == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("column order does not matter") {
    std::vector<int> perm(cb.cols());
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    CMat shuffled(cb.rows(), cb.cols());
    for (std::size_t j = 0; j < perm.size(); ++j) shuffled.col(j) = cb.col(perm[j]);
    const auto a = omp_hbf(h, opt, cb, 2);
    const auto b = omp_hbf(h, opt, shuffled, 2);
    CHECK(a.se == doctest::Approx(b.se).epsilon(1e-10));
    for (std::size_t i = 0; i < a.selected.size(); ++i) CHECK(perm[b.selected[i]] == a.selected[i]);
  }
  SUBCASE("too few atoms") {
    CHECK_THROWS_AS(omp_hbf(h, opt, cb.leftCols(1), 2), DimensionError);
  }
}

TEST_CASE("complexity formulas") {
  ComplexityParams p;
  p.n_tx = 128;
  p.n_subcarriers = 128;
  p.n_rf = 2;
  p.n_streams = 2;
  p.layers = 7;
  p.i_net = 10;
  // 9*128*128*4 + 128*128*2 + 10*(2*128*4*2 + 7*(3*128*2 + 2*128*2*2))
  CHECK(complexity_estimate(Scheme::ManNetFc, p) == 768512.0);
  CHECK(mannet_layer_cost(p) == 3 * 128 * 2 + 2 * 128 * 2 * 2);
  CHECK(submannet_layer_cost(p) == 3 * 128 + 2 * 128 * 2);
  // 9*128*128*4 + 128*128*2 + 10*(2048 + 7*(384 + 512))
  CHECK(complexity_estimate(Scheme::SubManNetSc, p) == 589824.0 + 32768.0 + 10 * (2048 + 7 * 896));
  p.n_rx = 2;
  p.n_candidates = 64;
  CHECK(complexity_estimate(Scheme::HeuristicSc, p) == 768512.0 + 64 * 2 * 128 * 2 * 2);
  CHECK(complexity_estimate(Scheme::FixedSc, p) == 768512.0 + 2 * 128 * 2 * 2);
  CHECK(complexity_estimate(Scheme::KstarSc, p) == 768512.0 + 2 * 128 * 2 * 2);
  p.n_paths = 4;
  CHECK(complexity_estimate(Scheme::Omp, p) ==
        128.0 * 128 * 4 + 2 * 128 * 4 * 2 + 4 * 128 * 4 + 4 * 128 * 2 * 2);
  CHECK(complexity_estimate(Scheme::Dbf, p) == 128.0 * 128 * 4);

  SUBCASE("layer cost ratio approaches 1/N_RF") {
    ComplexityParams q;
    q.n_rf = 4;
    q.n_streams = 4;
    const double r = submannet_layer_cost(q) / mannet_layer_cost(q);
    CHECK(r == doctest::Approx(0.25));
    q.n_rf = 8;
    CHECK(submannet_layer_cost(q) / mannet_layer_cost(q) == doctest::Approx(0.125));
  }
  SUBCASE("monotone in every dimension") {
    const ComplexityParams base;
    double ComplexityParams::*fields[] = {&ComplexityParams::n_tx,          &ComplexityParams::n_rx,
                                          &ComplexityParams::n_rf,          &ComplexityParams::n_streams,
                                          &ComplexityParams::n_subcarriers, &ComplexityParams::n_paths,
                                          &ComplexityParams::layers,        &ComplexityParams::i_net,
                                          &ComplexityParams::n_candidates};
    for (Scheme s : all_schemes()) {
      for (auto f : fields) {
        ComplexityParams bigger = base;
        bigger.*f *= 2;
        CHECK(complexity_estimate(s, bigger) >= complexity_estimate(s, base));
      }
    }
  }
  SUBCASE("scheme names") {
    for (Scheme s : all_schemes()) CHECK(parse_scheme(scheme_name(s)) == s);
    CHECK(all_schemes().size() == 7);
    CHECK_THROWS_AS(parse_scheme("mo-altmin"), std::invalid_argument);
  }
}
