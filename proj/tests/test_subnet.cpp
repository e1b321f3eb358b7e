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
#include "hbf/subnet.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace {

double matched_gain(const RMat& gains, const MappingMatrix& c) {
  return gains.cwiseProduct(c.matrix().cast<double>()).sum();
}

void check_valid(const MappingMatrix& c) {
  const auto& m = c.matrix();
  CHECK(is_valid_mapping(m));
  CHECK((m.rowwise().sum().array() == 1).all());
  CHECK((m.colwise().sum().array() == c.antennas_per_chain()).all());
}

UnfoldedNet small_net(std::uint64_t seed, int n_tx, int n_rf) {
  Rng rng = make_rng(seed, Stream::Training);
  return UnfoldedNet::random(n_tx, n_rf, 3, 0.5, rng);
}

ChannelTensor zero_channel(int n_rx, int n_tx, int k) {
  ChannelTensor h;
  h.h.assign(k, CMat::Zero(n_rx, n_tx));
  return h;
}

}  // namespace

TEST_CASE("antenna assignment") {
  SUBCASE("single chain takes every antenna") {
    RMat g = RMat::Random(6, 1).cwiseAbs();
    const MappingMatrix c = assign_antennas(g);
    CHECK((c.matrix().array() == 1).all());
  }
  SUBCASE("worked example") {
    RMat g(4, 2);
    g << 4, 1, 3, 2, 1, 5, 2, 6;
    const MappingMatrix c = assign_antennas(g);
    check_valid(c);
    CHECK(c.chain_of(0) == 0);
    CHECK(c.chain_of(1) == 0);
    CHECK(c.chain_of(2) == 1);
    CHECK(c.chain_of(3) == 1);
    CHECK(matched_gain(g, c) == 18.0);
  }
  SUBCASE("greedy is not enough") {
    // Column-by-column greedy picks rows 0,1 for chain 0 (gain 10) and leaves
    // 2,3 for chain 1 (gain 0); the optimum is 17.
    RMat g(4, 2);
    g << 5, 9, 5, 8, 0, 0, 0, 0;
    const MappingMatrix c = assign_antennas(g);
    check_valid(c);
    CHECK(matched_gain(g, c) == doctest::Approx(oracle::brute_force_best_gain(g)));
  }
  SUBCASE("matches exhaustive search") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto [n_tx, n_rf] : {std::pair{4, 2}, {6, 2}, {6, 3}, {8, 2}, {8, 4}}) {
      for (int rep = 0; rep < 20; ++rep) {
        RMat g(n_tx, n_rf);
        for (auto& v : g.reshaped()) v = u(gen);
        const MappingMatrix c = assign_antennas(g);
        check_valid(c);
        CHECK(matched_gain(g, c) == doctest::Approx(oracle::brute_force_best_gain(g)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("uniform gains give the block-diagonal layout") {
    for (auto [n_tx, n_rf] : {std::pair{8, 2}, {16, 4}, {12, 3}}) {
      const MappingMatrix c = assign_antennas(RMat::Ones(n_tx, n_rf));
      CHECK(c == MappingMatrix::block_diagonal(n_tx, n_rf));
    }
  }
  SUBCASE("two-chain elimination") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 30; ++rep) {
      RMat g(8, 2);
      for (auto& v : g.reshaped()) v = u(gen);
      const MappingMatrix c = assign_antennas_two_chain(g);
      check_valid(c);
      CHECK(matched_gain(g, c) <= oracle::brute_force_best_gain(g) + 1e-12);
    }
    CHECK_THROWS(assign_antennas_two_chain(RMat::Ones(8, 4)));
  }
}

TEST_CASE("dynamic mapping from the channel") {
  // Row 2 is the strongest, then row 0.
  CMat h(3, 4);
  h << cd(1, 0), cd(0, 2), cd(0.5, 0), cd(0, 0),
       cd(0.1, 0), cd(0, 0), cd(0.2, 0), cd(0.1, 0),
       cd(3, 0), cd(0, 0), cd(0, 0), cd(0, 4);
  const RMat g = antenna_chain_gains(h, 2);
  REQUIRE(g.rows() == 4);
  REQUIRE(g.cols() == 2);
  for (int n = 0; n < 4; ++n) {
    CHECK(g(n, 0) == doctest::Approx(std::abs(h(2, n))));
    CHECK(g(n, 1) == doctest::Approx(std::abs(h(0, n))));
  }
  const MappingMatrix c = dynamic_mapping(h, 2);
  check_valid(c);
  CHECK(c.chain_of(3) == 0);
  CHECK(c.chain_of(1) == 1);
  CHECK_THROWS_AS(antenna_chain_gains(h, 4), DimensionError);

  const auto dims = SystemDims::make(16, 4, 4, 2, 8);
  CHECK(fixed_mapping(dims) == MappingMatrix::block_diagonal(16, 4));
}

TEST_CASE("subcarrier helpers") {
  const auto dims = SystemDims::make(8, 2, 2, 2, 6);
  ChannelTensor h = zero_channel(2, 8, 6);
  h.h[3](0, 0) = cd(2, 0);
  h.h[5](1, 1) = cd(0, 2);
  CHECK(select_best_subcarrier(h) == 3);  // tie goes to the smaller index
  h.h[5](1, 2) = cd(0.01, 0);
  CHECK(select_best_subcarrier(h) == 5);
  CHECK(select_best_subcarrier(zero_channel(2, 8, 6)) == 0);

  CHECK(odd_subcarriers(8) == std::vector<int>{0, 2, 4, 6});
  CHECK(odd_subcarriers(2) == std::vector<int>{0});
  CHECK(odd_subcarriers(64).size() == 32);

  Rng g = make_rng(1, Stream::TestChannels);
  const auto ch = generate_channel(dims, g);
  const int k = select_best_subcarrier(ch);
  CHECK(best_subcarrier_mapping(ch, 2) == dynamic_mapping(ch.h[k], 2));
}

TEST_CASE("sub-connected designs") {
  const auto dims = SystemDims::make(16, 4, 4, 2, 8);
  Rng g = make_rng(2, Stream::TestChannels);
  const auto h = generate_channel(dims, g);
  const auto opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
  const UnfoldedNet net = small_net(3, 16, 4);

  SUBCASE("masked design lies in the sub-connected set") {
    std::mt19937_64 gen(1);
    const CMat f = oracle::random_phases(16, 4, gen);
    const MappingMatrix c = MappingMatrix::block_diagonal(16, 4);
    const auto r = masked_design(h, f, c, opt);
    const auto& frf = r.precoders.f_rf;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (c.matrix()(i, j)) CHECK(std::abs(std::abs(frf(i, j)) - 1.0) < 1e-12);
        else CHECK(frf(i, j) == cd(0, 0));
      }
    }
    for (const auto& bb : r.precoders.f_bb) CHECK(std::abs((frf * bb).squaredNorm() - 2.0) < 1e-9);
  }
  SUBCASE("heuristic returns the best candidate") {
    Rng r = make_rng(4, Stream::Design);
    const auto res = heuristic_sc_hbf(net, h, opt, 3, odd_subcarriers(8), r);
    REQUIRE(res.candidate_se.size() == 4);
    const double best = *std::max_element(res.candidate_se.begin(), res.candidate_se.end());
    CHECK(res.se == best);
    CHECK(res.candidate_se[res.chosen] == best);
    CHECK(res.mapping == dynamic_mapping(h.h[res.candidates[res.chosen]], 4));
    check_valid(res.mapping);
  }
  SUBCASE("one candidate equals a masked design") {
    Rng r1 = make_rng(5, Stream::Design);
    const auto res = heuristic_sc_hbf(net, h, opt, 3, {2}, r1);
    Rng r2 = make_rng(5, Stream::Design);
    const auto fc = fc_hbf_design(net, h, opt, 3, r2);
    const auto direct = masked_design(h, fc.precoders.f_rf, dynamic_mapping(h.h[2], 4), opt);
    CHECK(res.se == doctest::Approx(direct.se).epsilon(1e-12));
  }
  SUBCASE("fixed mapping design") {
    Rng r = make_rng(6, Stream::Design);
    const auto res = fixed_sc_hbf(net, h, opt, 3, r);
    CHECK(res.mapping == MappingMatrix::block_diagonal(16, 4));
    CHECK(res.se > 0.0);
  }
  SUBCASE("subManNet design") {
    Rng r = make_rng(7, Stream::Design);
    const auto res = sc_hbf_design(net, h, opt, 3, r);
    CHECK(res.mapping == best_subcarrier_mapping(h, 4));
    const MappingMatrix& c = res.mapping;
    for (int i = 0; i < 16; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (c.matrix()(i, j)) CHECK(std::abs(std::abs(res.precoders.f_rf(i, j)) - 1.0) < 1e-12);
        else CHECK(res.precoders.f_rf(i, j) == cd(0, 0));
      }
    }
    CHECK(res.se <= dbf_se(h, opt) + 1e-9);
    Rng r2 = make_rng(7, Stream::Design);
    CHECK(sc_hbf_design(net, h, opt, 3, r2).se == res.se);
  }
}

TEST_CASE("subManNet training") {
  const auto dims = SystemDims::make(8, 2, 2, 2, 4);
  const auto data = generate_channels(dims, 1, Stream::TrainChannels, 10);
  TrainConfig cfg;
  cfg.layers = 3;
  cfg.epochs = 2;
  cfg.batch_size = 5;
  const TrainResult a = train_submannet(data, dims, cfg);
  const TrainResult b = train_submannet(data, dims, cfg);
  CHECK(a.net == b.net);
  CHECK(a.history.size() == 4);
  for (const auto& e : a.history) CHECK(std::isfinite(e.loss));
  CHECK_FALSE(a.net == train_mannet(data, dims, cfg).net);
}

TEST_CASE("mapping mask vector") {
  Eigen::MatrixXi m(4, 2);
  m << 1, 0, 0, 1, 0, 1, 1, 0;
  const MappingMatrix c(m);
  const RVec v = c.mask_vector();
  REQUIRE(v.size() == 16);
  RVec expect(16);
  expect << 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0;
  CHECK(v == expect);
  CHECK_THROWS(MappingMatrix(Eigen::MatrixXi::Ones(4, 2)));
}
