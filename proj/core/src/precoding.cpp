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

#include "hbf/precoding.hpp"
#include "hbf/transforms.hpp"

#include <cmath>
#include <numbers>

#include "hbf/waterfill.hpp"

namespace hbf {

double residual_objective(const std::vector<CMat>& f_opt, const CMat& f_rf,
                          const std::vector<CMat>& f_bb) {
  if (f_opt.size() != f_bb.size()) throw DimensionError("residual: subcarrier counts differ");
  double total = 0.0;
  for (std::size_t k = 0; k < f_opt.size(); ++k) {
    total += (f_opt[k] - f_rf * f_bb[k]).squaredNorm();
  }
  return total;
}

CMat pseudo_inverse(const CMat& a, double rel_cutoff) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = svd.singularValues();
  RVec inv = RVec::Zero(sv.size());
  if (sv.size() > 0) {
    const double cutoff = rel_cutoff * sv[0];
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv[i] > cutoff) inv[i] = 1.0 / sv[i];
    }
  }
  return svd.matrixV() * inv.cast<cd>().asDiagonal() * svd.matrixU().adjoint();
}

CMat ls_digital(const CMat& f_rf, const CMat& f_opt_k) {
  if (f_rf.rows() != f_opt_k.rows()) throw DimensionError("ls_digital: N_t mismatch");
  return pseudo_inverse(f_rf) * f_opt_k;
}

std::vector<CMat> ls_digital(const CMat& f_rf, const std::vector<CMat>& f_opt) {
  const CMat pinv = pseudo_inverse(f_rf);
  std::vector<CMat> out;
  out.reserve(f_opt.size());
  for (const CMat& fo : f_opt) {
    if (fo.rows() != f_rf.rows()) throw DimensionError("ls_digital: N_t mismatch");
    out.push_back(pinv * fo);
  }
  return out;
}

namespace {

// Q^{-1/2} for Q = F^H F.
CMat inverse_sqrt_gram(const CMat& f_rf) {
  const CMat q = f_rf.adjoint() * f_rf;
  Eigen::SelfAdjointEigenSolver<CMat> eig(q);
  const RVec& lambda = eig.eigenvalues();  // ascending
  const double lmax = lambda[lambda.size() - 1];
  const double lmin = lambda[0];
  if (!(lmin > 0.0) || lmax / lmin > kMaxGramCondition) {
    throw ConditioningError("analog precoder Gram matrix is ill-conditioned (lambda_min = " +
                            std::to_string(lmin) + ", lambda_max = " + std::to_string(lmax) +
                            ")");
  }
  return eig.eigenvectors() * lambda.cwiseSqrt().cwiseInverse().cast<cd>().asDiagonal() *
         eig.eigenvectors().adjoint();
}

CMat waterfill_with(const CMat& q_isqrt, const CMat& h_k, const CMat& f_rf, double rho,
                    double noise_var, int n_streams) {
  const CMat eff = h_k * f_rf * q_isqrt;
  Eigen::JacobiSVD<CMat> svd(eff, Eigen::ComputeFullV);
  const auto n_sv = svd.singularValues().size();
  RVec gains = RVec::Zero(n_streams);
  for (int i = 0; i < n_streams && i < n_sv; ++i) {
    const double s = svd.singularValues()[i];
    gains[i] = rho / (noise_var * n_streams) * s * s;
  }
  const RVec p = waterfill(gains, static_cast<double>(n_streams));
  return q_isqrt * svd.matrixV().leftCols(n_streams) * p.cwiseSqrt().cast<cd>().asDiagonal();
}

void check_waterfill_dims(const CMat& h_k, const CMat& f_rf, int n_streams) {
  if (h_k.cols() != f_rf.rows()) throw DimensionError("waterfilling: H and F_RF disagree on N_t");
  if (n_streams < 1 || n_streams > f_rf.cols()) {
    throw DimensionError("waterfilling: need 1 <= N_s <= N_RF");
  }
}

}  // namespace

CMat waterfilling_digital(const CMat& h_k, const CMat& f_rf, double rho, double noise_var,
                          int n_streams) {
  check_waterfill_dims(h_k, f_rf, n_streams);
  return waterfill_with(inverse_sqrt_gram(f_rf), h_k, f_rf, rho, noise_var, n_streams);
}

std::vector<CMat> waterfilling_digital(const ChannelTensor& h, const CMat& f_rf, double rho,
                                       double noise_var, int n_streams) {
  const CMat q_isqrt = inverse_sqrt_gram(f_rf);
  std::vector<CMat> out;
  out.reserve(h.h.size());
  for (const CMat& hk : h.h) {
    check_waterfill_dims(hk, f_rf, n_streams);
    out.push_back(waterfill_with(q_isqrt, hk, f_rf, rho, noise_var, n_streams));
  }
  return out;
}

CMat unit_modulus_project(const CMat& f) {
  return f.unaryExpr([](const cd& v) {
    return v == cd(0.0, 0.0) ? cd(1.0, 0.0) : std::polar(1.0, std::arg(v));
  });
}

CMat unit_modulus_project(const RVec& x, int n_tx, int n_rf) {
  return unit_modulus_project(derealify(x, n_tx, n_rf));
}

CMat unit_modulus_project(const RVec& x, const MappingMatrix& c) {
  return c.apply(unit_modulus_project(x, c.n_tx(), c.n_rf()));
}

namespace {

double log2det_hpd(const CMat& a) {
  Eigen::LLT<CMat> llt(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("log-det of a non-PD matrix");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) acc += std::log2(llt.matrixL()(i, i).real());
  return 2.0 * acc;
}

double rate_with_combiner(const CMat& hk, const CMat& f, double snr_per_stream) {
  const CMat hf = hk * f;  // N_r x N_s
  const auto n_s = f.cols();
  const auto n_v = std::min<Eigen::Index>(hf.rows(), n_s);
  Eigen::JacobiSVD<CMat> svd(hf, Eigen::ComputeThinU);
  const CMat v = svd.matrixU().leftCols(n_v);
  const CMat inner = v.adjoint() * hf;
  const CMat m = CMat::Identity(n_v, n_v) + snr_per_stream * inner * inner.adjoint();
  return log2det_hpd(m);
}

}  // namespace

double spectral_efficiency(const ChannelTensor& h, const std::vector<CMat>& f_eff, double rho,
                           double noise_var) {
  if (f_eff.size() != h.h.size() || f_eff.empty()) {
    throw DimensionError("spectral_efficiency: one precoder per subcarrier required");
  }
  const auto n_s = f_eff.front().cols();
  const double snr = rho / (noise_var * static_cast<double>(n_s));
  double total = 0.0;
  for (std::size_t k = 0; k < h.h.size(); ++k) {
    if (f_eff[k].rows() != h.h[k].cols()) throw DimensionError("spectral_efficiency: N_t mismatch");
    total += rate_with_combiner(h.h[k], f_eff[k], snr);
  }
  return std::max(0.0, total / static_cast<double>(h.h.size()));
}

double spectral_efficiency(const ChannelTensor& h, const CMat& f_rf,
                           const std::vector<CMat>& f_bb, double rho, double noise_var) {
  std::vector<CMat> f_eff;
  f_eff.reserve(f_bb.size());
  for (const CMat& fb : f_bb) f_eff.push_back(f_rf * fb);
  return spectral_efficiency(h, f_eff, rho, noise_var);
}

double analog_se(const ChannelTensor& h, const Eigen::MatrixXi& c, const CMat& f_rf, double rho,
                 double noise_var, int n_streams) {
  if (c.rows() != f_rf.rows() || c.cols() != f_rf.cols()) {
    throw DimensionError("analog_se: mapping and precoder sizes differ");
  }
  const CMat f = f_rf.cwiseProduct(c.cast<cd>());
  const double snr = rho / (noise_var * n_streams);
  double total = 0.0;
  for (const CMat& hk : h.h) {
    const CMat hf = hk * f;
    const CMat m = CMat::Identity(hk.rows(), hk.rows()) + snr * hf * hf.adjoint();
    total += log2det_hpd(m);
  }
  return std::max(0.0, total / static_cast<double>(h.h.size()));
}

double analog_se(const ChannelTensor& h, const MappingMatrix& c, const CMat& f_rf, double rho,
                 double noise_var, int n_streams) {
  return analog_se(h, c.matrix(), f_rf, rho, noise_var, n_streams);
}

CMat random_analog_precoder(int n_tx, int n_rf, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  CMat f(n_tx, n_rf);
  // Column-major draw order.
  for (int c = 0; c < n_rf; ++c) {
    for (int r = 0; r < n_tx; ++r) f(r, c) = std::polar(1.0, phase(rng));
  }
  return f;
}

}  // namespace hbf
