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

#include "hbf/mannet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace hbf {

// ---------------------------------------------------------------------------
// Network container
// ---------------------------------------------------------------------------

void UnfoldedNet::validate() const {
  if (n_tx < 1 || n_rf < 1) throw DimensionError("network dimensions must be positive");
  if (!(t > 0.0) || !std::isfinite(t)) throw DimensionError("activation parameter t must be > 0");
  if (layers() < 2) throw DimensionError("an unfolded network needs at least two layers");
  if (w_u.size() != w_x.size()) throw DimensionError("weight vector lists differ in length");
  for (int l = 0; l < layers(); ++l) {
    if (w_x[l].size() != width() || w_u[l].size() != width()) {
      throw DimensionError("weight vector length must be 2 N_t N_RF");
    }
    if (!w_x[l].allFinite() || !w_u[l].allFinite()) throw DimensionError("non-finite weight");
  }
}

RVec UnfoldedNet::parameters() const {
  RVec flat(parameter_count());
  const auto w = width();
  for (int l = 0; l < layers(); ++l) {
    flat.segment(2 * l * w, w) = w_x[l];
    flat.segment((2 * l + 1) * w, w) = w_u[l];
  }
  return flat;
}

void UnfoldedNet::set_parameters(const RVec& flat) {
  if (flat.size() != parameter_count()) throw DimensionError("parameter vector has wrong length");
  const auto w = width();
  for (int l = 0; l < layers(); ++l) {
    w_x[l] = flat.segment(2 * l * w, w);
    w_u[l] = flat.segment((2 * l + 1) * w, w);
  }
}

UnfoldedNet UnfoldedNet::zeros(int n_tx, int n_rf, int layers, double t) {
  UnfoldedNet net;
  net.n_tx = n_tx;
  net.n_rf = n_rf;
  net.t = t;
  net.w_x.assign(static_cast<std::size_t>(layers), RVec::Zero(2 * n_tx * n_rf));
  net.w_u.assign(static_cast<std::size_t>(layers), RVec::Zero(2 * n_tx * n_rf));
  net.validate();
  return net;
}

UnfoldedNet UnfoldedNet::random(int n_tx, int n_rf, int layers, double t, Rng& rng) {
  UnfoldedNet net = zeros(n_tx, n_rf, layers, t);
  std::normal_distribution<double> init(0.0, 0.1);
  for (int l = 0; l < layers; ++l) {
    for (auto& v : net.w_x[l]) v = init(rng);
    for (auto& v : net.w_u[l]) v = init(rng);
  }
  return net;
}

// ---------------------------------------------------------------------------
// Layers
// ---------------------------------------------------------------------------

RVec psi(const RVec& x, double t) {
  return x.unaryExpr([t](double v) {
    // Same as -1 + (relu(v + t) - relu(v - t)) / t, without the rounding overshoot.
    return std::clamp(v / t, -1.0, 1.0);
  });
}

RVec psi_derivative(const RVec& x, double t) {
  return x.unaryExpr([t](double v) { return (v > -t && v < t) ? 1.0 / t : 0.0; });
}

RVec compute_u(const RVec& x, const RealStack& stack) {
  return stack.apply_normal(x) - stack.z_bar;
}

namespace {

void check_compat(const UnfoldedNet& net, const RealStack& stack) {
  if (net.n_tx != stack.n_tx || net.n_rf != stack.n_rf) {
    throw DimensionError("network and least-squares stack dimensions differ");
  }
}

ForwardTrace run_forward(const UnfoldedNet& net, const RealStack& stack, const RVec* mask) {
  check_compat(net, stack);
  const int n_layers = net.layers();
  ForwardTrace tr;
  tr.x.reserve(n_layers + 1);
  tr.x_hat.reserve(n_layers);
  tr.u.reserve(n_layers);
  tr.x.push_back(RVec::Zero(net.width()));
  if (mask) {
    if (mask->size() != net.width()) throw DimensionError("mask length must be 2 N_t N_RF");
    tr.mask = *mask;
  }
  for (int l = 0; l < n_layers; ++l) {
    const RVec& prev = tr.x.back();
    RVec u = compute_u(prev, stack);
    if (mask) u.array() *= mask->array();
    RVec x_hat = net.w_x[l].cwiseProduct(prev) + net.w_u[l].cwiseProduct(u);
    RVec x = psi(x_hat, net.t);
    if (mask) x.array() *= mask->array();
    tr.u.push_back(std::move(u));
    tr.x_hat.push_back(std::move(x_hat));
    tr.x.push_back(std::move(x));
  }
  return tr;
}

}  // namespace

ForwardTrace forward(const UnfoldedNet& net, const RealStack& stack) {
  return run_forward(net, stack, nullptr);
}

ForwardTrace forward(const UnfoldedNet& net, const RealStack& stack, const RVec& mask) {
  return run_forward(net, stack, &mask);
}

double loss(const ForwardTrace& trace, const RealStack& stack, double scale) {
  double total = 0.0;
  // ln(1) = 0, so the first layer never contributes.
  for (int l = 2; l <= trace.layers(); ++l) {
    total += std::log(static_cast<double>(l)) * scale * stack.objective(trace.x[l]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

RVec NetGradients::flatten() const {
  const auto w = w_x.empty() ? 0 : w_x.front().size();
  RVec flat(2 * static_cast<Eigen::Index>(w_x.size()) * w);
  for (std::size_t l = 0; l < w_x.size(); ++l) {
    flat.segment(2 * l * w, w) = w_x[l];
    flat.segment((2 * l + 1) * w, w) = w_u[l];
  }
  return flat;
}

NetGradients NetGradients::zeros_like(const UnfoldedNet& net) {
  NetGradients g;
  g.w_x.assign(net.w_x.size(), RVec::Zero(net.width()));
  g.w_u.assign(net.w_u.size(), RVec::Zero(net.width()));
  return g;
}

NetGradients& NetGradients::operator+=(const NetGradients& other) {
  for (std::size_t l = 0; l < w_x.size(); ++l) {
    w_x[l] += other.w_x[l];
    w_u[l] += other.w_u[l];
  }
  return *this;
}

NetGradients backward(const ForwardTrace& trace, const UnfoldedNet& net,
                      const RealStack& stack, double scale) {
  check_compat(net, stack);
  const int n_layers = net.layers();
  if (trace.layers() != n_layers) throw DimensionError("trace depth does not match the network");
  const RVec* mask = trace.mask ? &*trace.mask : nullptr;

  // d/dx of ln(l) * scale * sum_k ||z[k] - B[k] x||^2 is 2 ln(l) scale (A x - z_bar).
  auto direct = [&](int l) -> RVec {
    return (2.0 * std::log(static_cast<double>(l)) * scale) * compute_u(trace.x[l], stack);
  };

  NetGradients g = NetGradients::zeros_like(net);
  RVec dx = direct(n_layers);
  for (int l = n_layers; l >= 1; --l) {
    const int li = l - 1;
    RVec d = dx.cwiseProduct(psi_derivative(trace.x_hat[li], net.t));
    if (mask) d.array() *= mask->array();
    g.w_x[li] = d.cwiseProduct(trace.x[li]);
    g.w_u[li] = d.cwiseProduct(trace.u[li]);
    if (l == 1) break;
    RVec du = d.cwiseProduct(net.w_u[li]);
    if (mask) du.array() *= mask->array();
    dx = d.cwiseProduct(net.w_x[li]) + stack.apply_normal(du) + direct(l - 1);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Optimizer
// ---------------------------------------------------------------------------

Adam::Adam(AdamConfig config, Eigen::Index n_params)
    : config_(config), m_(RVec::Zero(n_params)), v_(RVec::Zero(n_params)) {}

void Adam::step(RVec& params, const RVec& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw DimensionError("optimizer state and parameter sizes differ");
  }
  ++t_;
  m_ = config_.beta1 * m_ + (1.0 - config_.beta1) * grads;
  v_ = config_.beta2 * v_ + (1.0 - config_.beta2) * grads.cwiseAbs2();
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

void TrainConfig::validate() const {
  if (layers < 2) throw std::invalid_argument("train: layers must be >= 2");
  if (!(t > 0.0)) throw std::invalid_argument("train: t must be > 0");
  if (epochs < 1 || batch_size < 1 || inner_iters < 1) {
    throw std::invalid_argument("train: epochs, batch size and inner iterations must be positive");
  }
  if (!(adam.learning_rate > 0.0) || !(adam.epsilon > 0.0) || !(adam.beta1 >= 0.0) ||
      !(adam.beta1 < 1.0) || !(adam.beta2 >= 0.0) || !(adam.beta2 < 1.0)) {
    throw std::invalid_argument("train: invalid optimizer settings");
  }
  if (!std::isfinite(train_snr_db) || !(noise_var > 0.0)) {
    throw std::invalid_argument("train: invalid SNR or noise variance");
  }
}

std::vector<double> TrainResult::epoch_means() const {
  std::vector<double> means;
  std::vector<int> counts;
  for (const auto& row : history) {
    if (row.epoch >= static_cast<int>(means.size())) {
      means.resize(static_cast<std::size_t>(row.epoch) + 1, 0.0);
      counts.resize(means.size(), 0);
    }
    means[row.epoch] += row.loss;
    counts[row.epoch] += 1;
  }
  for (std::size_t e = 0; e < means.size(); ++e) {
    if (counts[e] > 0) means[e] /= counts[e];
  }
  return means;
}

namespace {

void check_dataset(const std::vector<ChannelTensor>& dataset, const SystemDims& dims) {
  if (dataset.empty()) throw TrainingError("training set is empty");
  for (const auto& c : dataset) {
    if (c.shape.n_tx != dims.n_tx || c.shape.n_rx != dims.n_rx ||
        c.n_subcarriers() != dims.n_subcarriers) {
      throw DimensionError("dataset realization does not match the configured dimensions");
    }
  }
}

// Per-realization state carried across inner iterations.
struct Sample {
  const std::vector<CMat>* f_opt = nullptr;
  const MappingMatrix* mapping = nullptr;
  RVec mask;
  CMat f_rf;
  std::vector<CMat> f_bb;
};

void init_sample(Sample& s, int n_tx, int n_rf, Rng& rng) {
  s.f_rf = random_analog_precoder(n_tx, n_rf, rng);
  if (s.mapping) s.f_rf = s.mapping->apply(s.f_rf);
  s.f_bb = ls_digital(s.f_rf, *s.f_opt);
}

// One inner iteration for a set of samples; returns the summed loss and adds
// gradients into `grads` when non-null. Updates the precoders from the network output.
double inner_iteration(const UnfoldedNet& net, std::vector<Sample>& samples, double scale,
                       NetGradients* grads) {
  double total = 0.0;
  std::vector<RVec> outputs;
  outputs.reserve(samples.size());
  for (auto& s : samples) {
    const RealStack stack = RealStack::build(s.f_rf, *s.f_opt, s.f_bb);
    const ForwardTrace tr = s.mapping ? forward(net, stack, s.mask) : forward(net, stack);
    total += loss(tr, stack, scale);
    if (grads) *grads += backward(tr, net, stack, scale);
    outputs.push_back(tr.output());
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& s = samples[i];
    s.f_rf = s.mapping ? unit_modulus_project(outputs[i], *s.mapping)
                       : unit_modulus_project(outputs[i], net.n_tx, net.n_rf);
    s.f_bb = ls_digital(s.f_rf, *s.f_opt);
  }
  return total;
}

struct PreparedSet {
  std::vector<std::vector<CMat>> f_opt;
  std::vector<MappingMatrix> mappings;
};

PreparedSet prepare(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                    const TrainConfig& config, const MaskProvider& masks) {
  const double rho = std::pow(10.0, config.train_snr_db / 10.0) * config.noise_var;
  PreparedSet p;
  p.f_opt.reserve(dataset.size());
  for (const auto& c : dataset) {
    p.f_opt.push_back(optimal_digital_precoder(c, rho, config.noise_var, dims.n_streams).f_opt);
    if (masks) p.mappings.push_back(masks(c));
  }
  return p;
}

}  // namespace

TrainResult train_unfolded(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                           const TrainConfig& config, const MaskProvider& masks) {
  dims.validate();
  config.validate();
  check_dataset(dataset, dims);

  Rng rng = make_rng(config.seed, Stream::Training);
  TrainResult result;
  result.net = UnfoldedNet::random(dims.n_tx, dims.n_rf, config.layers, config.t, rng);
  UnfoldedNet& net = result.net;

  const PreparedSet prepared = prepare(dataset, dims, config, masks);
  std::vector<RVec> mask_vectors;
  for (const auto& m : prepared.mappings) mask_vectors.push_back(m.mask_vector());

  Adam adam(config.adam, net.parameter_count());
  const int n = static_cast<int>(dataset.size());
  const int n_batches = (n + config.batch_size - 1) / config.batch_size;
  std::vector<int> order(static_cast<std::size_t>(n));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (int b = 0; b < n_batches; ++b) {
      const int begin = b * config.batch_size;
      const int end = std::min(n, begin + config.batch_size);
      std::vector<Sample> samples(static_cast<std::size_t>(end - begin));
      for (int j = begin; j < end; ++j) {
        Sample& s = samples[static_cast<std::size_t>(j - begin)];
        const auto idx = static_cast<std::size_t>(order[static_cast<std::size_t>(j)]);
        s.f_opt = &prepared.f_opt[idx];
        if (masks) {
          s.mapping = &prepared.mappings[idx];
          s.mask = mask_vectors[idx];
        }
        init_sample(s, dims.n_tx, dims.n_rf, rng);
      }
      const double scale = 1.0 / (static_cast<double>(dims.n_subcarriers) * samples.size());

      BatchLoss row;
      row.epoch = epoch;
      row.batch = b;
      row.inner_iters = config.inner_iters;
      for (int i = 0; i < config.inner_iters; ++i) {
        NetGradients grads = NetGradients::zeros_like(net);
        const double batch_loss = inner_iteration(net, samples, scale, &grads);
        const RVec flat = grads.flatten();
        if (!std::isfinite(batch_loss) || !flat.allFinite()) {
          std::ostringstream msg;
          msg << "non-finite loss or gradient at epoch " << epoch << ", batch " << b
              << ", inner iteration " << i << " (loss = " << batch_loss << ")";
          throw TrainingError(msg.str());
        }
        RVec params = net.parameters();
        adam.step(params, flat);
        net.set_parameters(params);
        row.per_inner.push_back(batch_loss);
      }
      row.loss = std::accumulate(row.per_inner.begin(), row.per_inner.end(), 0.0) /
                 static_cast<double>(row.per_inner.size());
      result.history.push_back(std::move(row));
    }
  }
  return result;
}

TrainResult train_mannet(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                         const TrainConfig& config) {
  return train_unfolded(dataset, dims, config, {});
}

double evaluate_loss(const UnfoldedNet& net, const std::vector<ChannelTensor>& dataset,
                     const SystemDims& dims, const TrainConfig& config, std::uint64_t seed,
                     const MaskProvider& masks) {
  net.validate();
  check_dataset(dataset, dims);
  const PreparedSet prepared = prepare(dataset, dims, config, masks);
  const double scale =
      1.0 / (static_cast<double>(dims.n_subcarriers) * static_cast<double>(dataset.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    Rng rng = make_rng(seed, Stream::Validation, i);
    std::vector<Sample> one(1);
    one[0].f_opt = &prepared.f_opt[i];
    if (masks) {
      one[0].mapping = &prepared.mappings[i];
      one[0].mask = prepared.mappings[i].mask_vector();
    }
    init_sample(one[0], dims.n_tx, dims.n_rf, rng);
    double acc = 0.0;
    for (int it = 0; it < config.inner_iters; ++it) acc += inner_iteration(net, one, scale, nullptr);
    total += acc / config.inner_iters;
  }
  return total;
}

double select_activation_parameter(const std::vector<ChannelTensor>& train,
                                   const std::vector<ChannelTensor>& validation,
                                   const SystemDims& dims, TrainConfig config,
                                   const std::vector<double>& candidates,
                                   const MaskProvider& masks) {
  if (candidates.empty()) throw std::invalid_argument("no activation candidates");
  double best_t = candidates.front();
  double best_loss = std::numeric_limits<double>::infinity();
  for (double t : candidates) {
    config.t = t;
    const TrainResult r = train_unfolded(train, dims, config, masks);
    const double v = evaluate_loss(r.net, validation, dims, config, config.seed, masks);
    if (v < best_loss) {
      best_loss = v;
      best_t = t;
    }
  }
  return best_t;
}

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

DesignResult fc_hbf_design(const UnfoldedNet& net, const ChannelTensor& h,
                           const DigitalOptimal& opt, int i_net, Rng& rng) {
  net.validate();
  if (i_net < 1) throw std::invalid_argument("fc_hbf_design: I_net must be >= 1");
  if (h.shape.n_tx != net.n_tx) throw DimensionError("network N_t does not match the channel");
  if (opt.f_opt.size() != h.h.size()) throw DimensionError("F_opt does not match the channel");
  const int n_streams = static_cast<int>(opt.f_opt.front().cols());

  DesignResult out;
  CMat f_rf = random_analog_precoder(net.n_tx, net.n_rf, rng);
  std::vector<CMat> f_bb = ls_digital(f_rf, opt.f_opt);
  for (int i = 1; i <= i_net; ++i) {
    const RealStack stack = RealStack::build(f_rf, opt.f_opt, f_bb);
    const ForwardTrace tr = forward(net, stack);
    f_rf = unit_modulus_project(tr.output(), net.n_tx, net.n_rf);
    f_bb = i < i_net ? ls_digital(f_rf, opt.f_opt)
                     : waterfilling_digital(h, f_rf, opt.rho, opt.noise_var, n_streams);
  }
  out.se = spectral_efficiency(h, f_rf, f_bb, opt.rho, opt.noise_var);
  out.precoders = PrecoderPair{std::move(f_rf), std::move(f_bb)};
  return out;
}

}  // namespace hbf
