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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hbf/mannet.hpp"
#include "hbf/model_io.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace {

struct Problem {
  CMat f_rf;
  std::vector<CMat> f_opt;
  std::vector<CMat> f_bb;
  RealStack stack;
};

Problem random_problem(std::uint64_t seed, int n_tx, int n_rf, int n_s, int k) {
  std::mt19937_64 g(seed);
  Problem p;
  p.f_rf = oracle::random_phases(n_tx, n_rf, g);
  for (int i = 0; i < k; ++i) p.f_opt.push_back(oracle::random_complex(n_tx, n_s, g));
  p.f_bb = ls_digital(p.f_rf, p.f_opt);
  p.stack = RealStack::build(p.f_rf, p.f_opt, p.f_bb);
  return p;
}

UnfoldedNet random_net(std::uint64_t seed, int n_tx, int n_rf, int layers, double t, double scale) {
  Rng rng = make_rng(seed, Stream::Training);
  UnfoldedNet net = UnfoldedNet::random(n_tx, n_rf, layers, t, rng);
  std::normal_distribution<double> n(0.0, scale);
  for (auto& w : net.w_x) for (auto& v : w) v = n(rng);
  for (auto& w : net.w_u) for (auto& v : w) v = n(rng) - 0.3;
  return net;
}

double min_kink_distance(const ForwardTrace& tr, double t) {
  double d = 1e300;
  for (const auto& xh : tr.x_hat) {
    for (double v : xh) d = std::min({d, std::abs(v - t), std::abs(v + t)});
  }
  return d;
}

RVec finite_difference(UnfoldedNet net, const RealStack& st, double scale, const RVec* mask,
                       double h) {
  const RVec p = net.parameters();
  RVec fd(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    RVec q = p;
    q[i] += h;
    net.set_parameters(q);
    const double lp = loss(mask ? forward(net, st, *mask) : forward(net, st), st, scale);
    q[i] -= 2 * h;
    net.set_parameters(q);
    const double lm = loss(mask ? forward(net, st, *mask) : forward(net, st), st, scale);
    fd[i] = (lp - lm) / (2 * h);
  }
  return fd;
}

std::vector<ChannelTensor> small_set(int n, std::uint64_t seed) {
  return generate_channels(SystemDims::make(8, 2, 2, 2, 4), seed, Stream::TrainChannels, n);
}

}  // namespace

TEST_CASE("activation") {
  RVec x(7);
  x << 0.0, 0.25, -0.25, 0.5, 3.0, -0.5, -7.0;
  const RVec y = psi(x, 0.5);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == doctest::Approx(0.5));
  CHECK(y[2] == doctest::Approx(-0.5));
  CHECK(y[3] == 1.0);
  CHECK(y[4] == 1.0);
  CHECK(y[5] == -1.0);
  CHECK(y[6] == -1.0);
  for (double t : {0.01, 0.3, 2.0}) CHECK(psi(RVec::Zero(1), t)[0] == 0.0);
  const RVec d = psi_derivative(x, 0.5);
  CHECK(d[0] == 2.0);
  CHECK(d[1] == 2.0);
  CHECK(d[3] == 0.0);  // kink
  CHECK(d[5] == 0.0);  // kink
  CHECK(d[4] == 0.0);
}

TEST_CASE("input vector u") {
  const auto p = random_problem(1, 6, 2, 2, 3);
  CHECK((compute_u(RVec::Zero(24), p.stack) + p.stack.z_bar).norm() == 0.0);
  RMat a = RMat::Zero(24, 24);
  for (const auto& bb : p.f_bb) {
    const RMat b = oracle::dense_b(bb, 6);
    a += b.transpose() * b;
  }
  const RVec x = RVec::Random(24);
  CHECK((compute_u(x, p.stack) - (a * x - p.stack.z_bar)).norm() < 1e-10);

  const std::vector<CMat> zero_bb(3, CMat::Zero(2, 2));
  const RealStack empty = RealStack::build(p.f_rf, p.f_opt, zero_bb);
  CHECK(compute_u(x, empty).isZero());
}

TEST_CASE("forward pass") {
  const auto p = random_problem(2, 8, 2, 2, 4);
  SUBCASE("zero weights") {
    const auto tr = forward(UnfoldedNet::zeros(8, 2, 4, 0.5), p.stack);
    for (const auto& x : tr.x) CHECK(x.isZero());
  }
  SUBCASE("first layer reproduces psi(z_bar)") {
    UnfoldedNet net = UnfoldedNet::zeros(8, 2, 2, 0.5);
    net.w_u[0].setConstant(-1.0);
    const auto tr = forward(net, p.stack);
    CHECK((tr.x[1] - psi(p.stack.z_bar, 0.5)).norm() < 1e-15);
  }
  SUBCASE("range and locality") {
    const UnfoldedNet net = random_net(3, 8, 2, 4, 0.2, 2.0);
    const auto tr = forward(net, p.stack);
    REQUIRE(tr.layers() == 4);
    CHECK(tr.x[0].isZero());
    for (const auto& x : tr.x) CHECK(x.cwiseAbs().maxCoeff() <= 1.0);
    for (const auto& x : tr.x) {
      CHECK(derealify(x, 8, 2).cwiseAbs().maxCoeff() <= std::sqrt(2.0) + 1e-15);
    }
    // Perturbing w_x[l][n] changes only x_l[n] for fixed layer inputs.
    const int l = 2, n = 5;
    UnfoldedNet bumped = net;
    bumped.w_x[l][n] += 0.01;
    const RVec xh = bumped.w_x[l].cwiseProduct(tr.x[l]) + bumped.w_u[l].cwiseProduct(tr.u[l]);
    const RVec diff = psi(xh, net.t) - tr.x[l + 1];
    for (Eigen::Index i = 0; i < diff.size(); ++i) {
      if (i != n) CHECK(diff[i] == 0.0);
    }
  }
  SUBCASE("masked forward") {
    const UnfoldedNet net = random_net(4, 8, 2, 3, 0.5, 1.0);
    const auto plain = forward(net, p.stack);
    const auto ones = forward(net, p.stack, RVec::Ones(32));
    for (int l = 0; l <= 3; ++l) CHECK(ones.x[l] == plain.x[l]);
    const auto zeros = forward(net, p.stack, RVec::Zero(32));
    for (const auto& x : zeros.x) CHECK(x.isZero());
    const MappingMatrix c = MappingMatrix::block_diagonal(8, 2);
    const RVec mask = c.mask_vector();
    const auto masked = forward(net, p.stack, mask);
    for (int l = 1; l <= 3; ++l) {
      for (Eigen::Index i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0.0) CHECK(masked.x[l][i] == 0.0);
        else CHECK(masked.x[l][i] != 0.0);
      }
    }
  }
}

TEST_CASE("loss") {
  const auto p = random_problem(5, 8, 2, 2, 4);
  const UnfoldedNet net = random_net(5, 8, 2, 2, 0.5, 1.0);
  const auto tr = forward(net, p.stack);
  double hand = 0;
  for (int k = 0; k < 4; ++k) {
    const CMat f = derealify(tr.x[2], 8, 2);
    hand += (p.f_opt[k] - f * p.f_bb[k]).squaredNorm();
  }
  CHECK(loss(tr, p.stack, 0.25) == doctest::Approx(std::log(2.0) * 0.25 * hand).epsilon(1e-12));

  SUBCASE("zero target") {
    std::vector<CMat> zero(4, CMat::Zero(8, 2));
    const RealStack st = RealStack::build(p.f_rf, zero, p.f_bb);
    CHECK(loss(forward(net, st), st, 1.0) == 0.0);
  }
  SUBCASE("empty stack gives the loss at x = 0") {
    const std::vector<CMat> zero_bb(4, CMat::Zero(2, 2));
    std::vector<CMat> zero_opt(4, CMat::Zero(8, 2));
    const RealStack st = RealStack::build(p.f_rf, zero_opt, zero_bb);
    const auto t0 = forward(random_net(6, 8, 2, 3, 0.5, 1.0), st);
    for (const auto& x : t0.x) CHECK(x.isZero());
    CHECK(loss(t0, st, 1.0) == 0.0);
  }
  SUBCASE("subcarrier permutation") {
    std::vector<CMat> opt_r(p.f_opt.rbegin(), p.f_opt.rend());
    std::vector<CMat> bb_r(p.f_bb.rbegin(), p.f_bb.rend());
    const RealStack st = RealStack::build(p.f_rf, opt_r, bb_r);
    CHECK(loss(forward(net, st), st, 0.25) == doctest::Approx(loss(tr, p.stack, 0.25)).epsilon(1e-12));
  }
}

TEST_CASE("backward pass against finite differences") {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 10; ++seed) {
    const auto p = random_problem(100 + seed, 8, 2, 2, 4);
    const UnfoldedNet net = random_net(seed, 8, 2, 3, 0.5, 0.8);
    const auto tr = forward(net, p.stack);
    if (min_kink_distance(tr, net.t) < 1e-3) continue;
    ++checked;
    const RVec g = backward(tr, net, p.stack, 0.125).flatten();
    const RVec fd = finite_difference(net, p.stack, 0.125, nullptr, 1e-5);
    CHECK((g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff() < 1e-5);
  }
  SUBCASE("masked network") {
    const auto p = random_problem(300, 8, 2, 2, 4);
    const RVec mask = MappingMatrix::block_diagonal(8, 2).mask_vector();
    const UnfoldedNet net = random_net(301, 8, 2, 3, 0.5, 0.8);
    const auto tr = forward(net, p.stack, mask);
    REQUIRE(min_kink_distance(tr, net.t) > 1e-3);
    const NetGradients gr = backward(tr, net, p.stack, 0.125);
    const RVec fd = finite_difference(net, p.stack, 0.125, &mask, 1e-5);
    const RVec g = gr.flatten();
    CHECK((g - fd).cwiseAbs().maxCoeff() / g.cwiseAbs().maxCoeff() < 1e-5);
    for (int l = 0; l < 3; ++l) {
      for (Eigen::Index i = 0; i < mask.size(); ++i) {
        if (mask[i] == 0.0) {
          CHECK(gr.w_x[l][i] == 0.0);
          CHECK(gr.w_u[l][i] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("backward special cases") {
  SUBCASE("saturated activations block the gradient") {
    const auto p = random_problem(7, 4, 2, 2, 2);
    UnfoldedNet net = UnfoldedNet::zeros(4, 2, 3, 0.5);
    for (auto& w : net.w_u) w.setConstant(-1e6);
    const auto tr = forward(net, p.stack);
    for (const auto& xh : tr.x_hat) CHECK(xh.cwiseAbs().minCoeff() > net.t);
    CHECK(backward(tr, net, p.stack, 1.0).flatten().isZero());
  }
  SUBCASE("zero weights: closed form on a single-entry precoder") {
    // N_t = N_RF = 1: all x_l = 0, so every layer sees u = -z_bar in the linear
    // region and dL/dw_u[l] = 2 ln(l) scale z_bar^2 / t, dL/dw_x[l] = 0.
    CMat f_rf(1, 1);
    f_rf(0, 0) = cd(0.6, 0.8);
    std::vector<CMat> f_opt{CMat::Constant(1, 1, cd(0.3, -0.2)), CMat::Constant(1, 1, cd(-0.1, 0.4))};
    const auto f_bb = ls_digital(f_rf, f_opt);
    const RealStack st = RealStack::build(f_rf, f_opt, f_bb);
    const double t = 2.0, scale = 0.5;
    // Keep z_bar inside the linear region.
    REQUIRE(st.z_bar.cwiseAbs().maxCoeff() < t);
    const UnfoldedNet net = UnfoldedNet::zeros(1, 1, 3, t);
    const NetGradients g = backward(forward(net, st), net, st, scale);
    for (int l = 1; l <= 3; ++l) {
      CHECK(g.w_x[l - 1].isZero());
      for (int i = 0; i < 2; ++i) {
        const double expect = 2 * std::log(static_cast<double>(l)) * scale * st.z_bar[i] * st.z_bar[i] / t;
        CHECK(g.w_u[l - 1][i] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Adam") {
  SUBCASE("zero gradient") {
    Adam adam({}, 3);
    RVec p(3);
    p << 1, 2, 3;
    const RVec before = p;
    adam.step(p, RVec::Zero(3));
    CHECK(p == before);
    CHECK(adam.steps() == 1);
  }
  SUBCASE("constant gradient moves by the learning rate") {
    Adam adam({}, 1);
    RVec p = RVec::Zero(1);
    RVec prev = p;
    for (int i = 0; i < 500; ++i) {
      prev = p;
      adam.step(p, RVec::Constant(1, 0.37));
    }
    CHECK(prev[0] - p[0] == doctest::Approx(1e-4).epsilon(1e-6));
  }
  SUBCASE("hand recursion") {
    AdamConfig cfg;
    cfg.learning_rate = 0.01;
    Adam adam(cfg, 1);
    RVec p = RVec::Constant(1, 0.5);
    const std::vector<double> grads{0.3, -1.2, 0.05};
    for (double g : grads) adam.step(p, RVec::Constant(1, g));
    CHECK(std::abs(p[0] - oracle::adam_scalar(0.5, grads, 0.01, 0.9, 0.999, 1e-8)) < 1e-12);
  }
}

TEST_CASE("network container") {
  CHECK_THROWS_AS(UnfoldedNet::zeros(8, 2, 1, 0.5), DimensionError);
  CHECK_THROWS_AS(UnfoldedNet::zeros(8, 2, 3, 0.0), DimensionError);
  UnfoldedNet net = random_net(9, 8, 2, 3, 0.5, 1.0);
  CHECK(net.parameter_count() == 2 * 3 * 32);
  const RVec flat = net.parameters();
  CHECK(flat.segment(0, 32) == net.w_x[0]);
  CHECK(flat.segment(32, 32) == net.w_u[0]);
  UnfoldedNet other = UnfoldedNet::zeros(8, 2, 3, 0.5);
  other.set_parameters(flat);
  CHECK(other == net);

  // N(0, 0.01) initialization: variance 0.01.
  Rng rng = make_rng(1, Stream::Training);
  const UnfoldedNet big = UnfoldedNet::random(64, 4, 4, 0.5, rng);
  const RVec w = big.parameters();
  const double var = w.squaredNorm() / static_cast<double>(w.size());
  CHECK(std::abs(var - 0.01) < 0.001);
}

TEST_CASE("training") {
  const auto dims = SystemDims::make(8, 2, 2, 2, 4);
  const auto data = small_set(12, 1);
  TrainConfig cfg;
  cfg.layers = 3;
  cfg.epochs = 2;
  cfg.batch_size = 5;
  cfg.inner_iters = 2;
  const TrainResult a = train_mannet(data, dims, cfg);
  const TrainResult b = train_mannet(data, dims, cfg);
  CHECK(a.net == b.net);
  REQUIRE(a.history.size() == 2 * 3);
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].loss == b.history[i].loss);
    CHECK(a.history[i].per_inner.size() == 2);
    CHECK(a.history[i].epoch == static_cast<int>(i / 3));
    CHECK(a.history[i].batch == static_cast<int>(i % 3));
  }
  CHECK(a.epoch_means().size() == 2);

  cfg.seed = 2;
  CHECK_FALSE(train_mannet(data, dims, cfg).net == a.net);

  CHECK_THROWS_AS(train_mannet({}, dims, cfg), TrainingError);
  CHECK_THROWS_AS(train_mannet(data, SystemDims::make(16, 2, 2, 2, 4), cfg), DimensionError);
  cfg.layers = 1;
  CHECK_THROWS(train_mannet(data, dims, cfg));
}

TEST_CASE("evaluation loss and activation selection") {
  const auto dims = SystemDims::make(8, 2, 2, 2, 4);
  const auto train = small_set(10, 2);
  const auto val = small_set(4, 3);
  TrainConfig cfg;
  cfg.layers = 3;
  cfg.epochs = 1;
  cfg.batch_size = 5;
  const double t = select_activation_parameter(train, val, dims, cfg, {0.1, 0.5});
  CHECK((t == 0.1 || t == 0.5));
  // The chosen candidate has the lowest validation loss.
  double best = 1e300, chosen = 0;
  for (double c : {0.1, 0.5}) {
    cfg.t = c;
    const auto r = train_mannet(train, dims, cfg);
    const double v = evaluate_loss(r.net, val, dims, cfg, cfg.seed);
    if (v < best) {
      best = v;
      chosen = c;
    }
  }
  CHECK(t == chosen);
}

TEST_CASE("fully connected design") {
  const auto dims = SystemDims::make(16, 2, 2, 2, 8);
  Rng g = make_rng(5, Stream::TestChannels);
  const auto h = generate_channel(dims, g);
  const auto opt = optimal_digital_precoder(h, 10.0, 1.0, 2);
  const UnfoldedNet net = random_net(10, 16, 2, 4, 0.5, 0.5);
  Rng r1 = make_rng(1, Stream::Design);
  const auto res = fc_hbf_design(net, h, opt, 5, r1);
  CHECK((res.precoders.f_rf.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
  for (const auto& bb : res.precoders.f_bb) {
    CHECK(std::abs((res.precoders.f_rf * bb).squaredNorm() - 2.0) < 1e-9);
  }
  CHECK(res.se > 0.0);
  CHECK(res.se == doctest::Approx(spectral_efficiency(h, res.precoders.f_rf, res.precoders.f_bb, 10.0, 1.0)));
  Rng r2 = make_rng(1, Stream::Design);
  CHECK(fc_hbf_design(net, h, opt, 5, r2).se == res.se);
  Rng r3 = make_rng(1, Stream::Design);
  CHECK_THROWS_AS(fc_hbf_design(random_net(1, 8, 2, 3, 0.5, 1), h, opt, 5, r3), DimensionError);
}

TEST_CASE("model files") {
  const auto dir = std::filesystem::temp_directory_path() / "hbf_test_mannet";
  std::filesystem::create_directories(dir);
  const UnfoldedNet net = random_net(11, 8, 2, 3, 0.25, 1.0);
  const auto path = dir / "m.mnet";
  model_write(path, net);
  CHECK(model_read(path) == net);
  CHECK(model_read(path, ModelExpectation{8, 2}) == net);
  CHECK_THROWS_AS(model_read(path, ModelExpectation{16, 2}), DimensionError);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  CHECK(bytes.size() == 4 + 4 * 4 + 8 + 2 * 3 * 32 * 8);
  const auto cut = dir / "cut.mnet";
  std::ofstream(cut, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 8));
  CHECK_THROWS_AS(model_read(cut), FormatError);
  auto bad = bytes;
  bad[1] = 'X';
  const auto magic = dir / "magic.mnet";
  std::ofstream(magic, std::ios::binary).write(bad.data(), static_cast<std::streamsize>(bad.size()));
  CHECK_THROWS_AS(model_read(magic), FormatError);
}
