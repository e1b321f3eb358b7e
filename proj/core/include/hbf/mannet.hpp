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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hbf/channel.hpp"
#include "hbf/dims.hpp"
#include "hbf/mapping.hpp"
#include "hbf/precoding.hpp"
#include "hbf/rng.hpp"
#include "hbf/transforms.hpp"

namespace hbf {

// Unfolded projected-gradient network. Layer l maps (x_{l-1}, u_{l-1}) to
// x_l = psi_t(w_x[l] (.) x_{l-1} + w_u[l] (.) u_{l-1}); every weight vector has
// 2 N_t N_RF entries, so neuron n only sees neuron n of the previous layer.
struct UnfoldedNet {
  int n_tx = 0;
  int n_rf = 0;
  double t = 0.5;
  std::vector<RVec> w_x;
  std::vector<RVec> w_u;

  int layers() const { return static_cast<int>(w_x.size()); }
  int width() const { return 2 * n_tx * n_rf; }
  Eigen::Index parameter_count() const { return 2 * layers() * width(); }

  // Requires L >= 2, t > 0 and finite weights of the right length.
  void validate() const;

  // Flat layer-major view, w_x before w_u within a layer.
  RVec parameters() const;
  void set_parameters(const RVec& flat);

  // Weights drawn from N(0, 0.01) (variance).
  static UnfoldedNet random(int n_tx, int n_rf, int layers, double t, Rng& rng);
  static UnfoldedNet zeros(int n_tx, int n_rf, int layers, double t);

  bool operator==(const UnfoldedNet&) const = default;
};

inline constexpr double kDefaultActivationT = 0.5;

// psi_t(x) = -1 + (relu(x + t) - relu(x - t)) / t, element-wise.
RVec psi(const RVec& x, double t);
// 1/t strictly inside (-t, t), 0 elsewhere (kinks included).
RVec psi_derivative(const RVec& x, double t);

// u = -z_bar + sum_k B_bar[k] x
RVec compute_u(const RVec& x, const RealStack& stack);

struct ForwardTrace {
  std::vector<RVec> x;      // x[0] = 0, x[l] = layer-l output, l = 1..L
  std::vector<RVec> x_hat;  // x_hat[l-1] = layer-l pre-activation
  std::vector<RVec> u;      // u[l-1] = (masked) input of layer l
  std::optional<RVec> mask;

  const RVec& output() const { return x.back(); }
  int layers() const { return static_cast<int>(x_hat.size()); }
};

ForwardTrace forward(const UnfoldedNet& net, const RealStack& stack);
// Sub-connected variant: u and the activation are multiplied by the mask, and
// masked neurons stay exactly zero.
ForwardTrace forward(const UnfoldedNet& net, const RealStack& stack, const RVec& mask);

// sum_l ln(l) * scale * sum_k ||z[k] - B[k] x_l||^2; scale is 1/(K |batch|) in training.
double loss(const ForwardTrace& trace, const RealStack& stack, double scale);

struct NetGradients {
  std::vector<RVec> w_x;
  std::vector<RVec> w_u;

  RVec flatten() const;
  static NetGradients zeros_like(const UnfoldedNet& net);
  NetGradients& operator+=(const NetGradients& other);
};

// Exact reverse-mode gradient of loss(forward(net, stack), stack, scale).
NetGradients backward(const ForwardTrace& trace, const UnfoldedNet& net,
                      const RealStack& stack, double scale);

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(AdamConfig config, Eigen::Index n_params);

  void step(RVec& params, const RVec& grads);
  long steps() const { return t_; }
  const RVec& first_moment() const { return m_; }
  const RVec& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  RVec m_;
  RVec v_;
  long t_ = 0;
};

struct TrainConfig {
  int layers = 4;
  double t = kDefaultActivationT;
  int epochs = 30;
  int batch_size = 8;
  int inner_iters = 3;
  double train_snr_db = 10.0;
  double noise_var = 1.0;
  AdamConfig adam;
  std::uint64_t seed = 1;

  void validate() const;
};

struct BatchLoss {
  int epoch = 0;
  int batch = 0;
  int inner_iters = 0;
  double loss = 0.0;               // mean over the inner iterations
  std::vector<double> per_inner;   // loss at each inner iteration
};

struct TrainResult {
  UnfoldedNet net;
  std::vector<BatchLoss> history;

  // Mean batch loss of each epoch.
  std::vector<double> epoch_means() const;
};

// Unsupervised training on channel realizations: each batch starts from random
// unit-modulus analog precoders with LS digital precoders, and for each inner
// iteration runs forward/backward, takes one Adam step and refreshes the
// precoders from the pre-step network output.
TrainResult train_mannet(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                         const TrainConfig& config);

// Connection pattern used for a realization when training a sub-connected network.
using MaskProvider = std::function<MappingMatrix(const ChannelTensor&)>;

// Training loop shared by both networks; an empty provider trains the fully
// connected network.
TrainResult train_unfolded(const std::vector<ChannelTensor>& dataset, const SystemDims& dims,
                           const TrainConfig& config, const MaskProvider& masks);

// Returns the candidate activation parameter with the lowest final-epoch
// validation loss.
double select_activation_parameter(const std::vector<ChannelTensor>& train,
                                   const std::vector<ChannelTensor>& validation,
                                   const SystemDims& dims, TrainConfig config,
                                   const std::vector<double>& candidates,
                                   const MaskProvider& masks = {});

// Mean network loss of `net` over a dataset (batch scale 1/(K |D|)), starting
// from random analog precoders drawn from `seed`.
double evaluate_loss(const UnfoldedNet& net, const std::vector<ChannelTensor>& dataset,
                     const SystemDims& dims, const TrainConfig& config, std::uint64_t seed,
                     const MaskProvider& masks = {});

// Analog and digital precoders by alternating the network with LS digital
// updates; the final digital stage is water-filled.
DesignResult fc_hbf_design(const UnfoldedNet& net, const ChannelTensor& h,
                           const DigitalOptimal& opt, int i_net, Rng& rng);

}  // namespace hbf
