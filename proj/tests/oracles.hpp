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

// Reference computations used only by the tests. Everything here is written
// from the defining formulas with dense matrices and brute force, without
// calling the structured code paths under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "hbf/types.hpp"

namespace oracle {

using hbf::cd;
using hbf::CMat;
using hbf::RMat;
using hbf::RVec;

// Column-major vec, real parts on top.
inline RVec vec_real(const CMat& f) {
  const Eigen::Index n = f.size();
  RVec x(2 * n);
  for (Eigen::Index j = 0, i = 0; j < f.cols(); ++j) {
    for (Eigen::Index r = 0; r < f.rows(); ++r, ++i) {
      x[i] = f(r, j).real();
      x[n + i] = f(r, j).imag();
    }
  }
  return x;
}

// Real form [[Re, -Im], [Im, Re]] of kron(F_BB^T, I_{N_t}).
inline RMat dense_b(const CMat& f_bb, int n_tx) {
  const CMat t = f_bb.transpose();
  CMat kron = CMat::Zero(t.rows() * n_tx, t.cols() * n_tx);
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      kron.block(i * n_tx, j * n_tx, n_tx, n_tx) = t(i, j) * CMat::Identity(n_tx, n_tx);
    }
  }
  const Eigen::Index r = kron.rows();
  const Eigen::Index c = kron.cols();
  RMat b(2 * r, 2 * c);
  b.topLeftCorner(r, c) = kron.real();
  b.topRightCorner(r, c) = -kron.imag();
  b.bottomLeftCorner(r, c) = kron.imag();
  b.bottomRightCorner(r, c) = kron.real();
  return b;
}

inline CMat random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cd(n(g), n(g));
  }
  return m;
}

inline CMat random_phases(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = std::polar(1.0, u(g));
  }
  return m;
}

// Maximizes sum_i log2(1 + a_i p_i) over p on a simplex grid (two streams).
struct GridResult {
  double p1 = 0;
  double p2 = 0;
  double value = -1;
};
inline GridResult grid_two_streams(double a1, double a2, double budget, double step) {
  GridResult best;
  const int n = static_cast<int>(std::lround(budget / step));
  for (int i = 0; i <= n; ++i) {
    const double p1 = i * step;
    const double p2 = budget - p1;
    const double v = std::log2(1 + a1 * p1) + std::log2(1 + a2 * p2);
    if (v > best.value) best = {p1, p2, v};
  }
  return best;
}

// log2 det(I + A) for Hermitian PSD A through its eigenvalues.
inline double log2det_eig(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  double s = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    s += std::log2(1.0 + std::max(0.0, es.eigenvalues()[i]));
  }
  return s;
}

// Rate with an explicit combiner W (N_r x N_s): log2 det(I + snr (W^H W)^-1 W^H H F F^H H^H W).
inline double rate_with(const CMat& h, const CMat& f, const CMat& w, double snr) {
  const CMat g = w.adjoint() * h * f;
  const CMat ww = w.adjoint() * w;
  Eigen::LLT<CMat> llt(ww);
  const CMat l_inv = llt.matrixL().solve(CMat::Identity(ww.rows(), ww.cols()));
  const CMat a = snr * l_inv * g * g.adjoint() * l_inv.adjoint();
  return log2det_eig((a + a.adjoint()) / 2.0);
}

// All valid assignments of n_tx antennas to n_rf chains with m per chain.
inline void enumerate_mappings(int n_tx, int n_rf, const std::function<void(const std::vector<int>&)>& f) {
  const int m = n_tx / n_rf;
  std::vector<int> chain(n_tx, -1);
  std::vector<int> load(n_rf, 0);
  std::function<void(int)> rec = [&](int a) {
    if (a == n_tx) {
      f(chain);
      return;
    }
    for (int c = 0; c < n_rf; ++c) {
      if (load[c] == m) continue;
      chain[a] = c;
      ++load[c];
      rec(a + 1);
      --load[c];
    }
  };
  rec(0);
}

inline double brute_force_best_gain(const RMat& gains) {
  double best = -1;
  enumerate_mappings(static_cast<int>(gains.rows()), static_cast<int>(gains.cols()),
                     [&](const std::vector<int>& chain) {
                       double s = 0;
                       for (std::size_t a = 0; a < chain.size(); ++a) s += gains(a, chain[a]);
                       best = std::max(best, s);
                     });
  return best;
}

// Adam recursion on a scalar, written out step by step.
inline double adam_scalar(double p, const std::vector<double>& grads, double lr, double b1, double b2,
                          double eps) {
  double m = 0, v = 0;
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i];
    m = b1 * m + (1 - b1) * g;
    v = b2 * v + (1 - b2) * g * g;
    const double mh = m / (1 - std::pow(b1, static_cast<double>(i + 1)));
    const double vh = v / (1 - std::pow(b2, static_cast<double>(i + 1)));
    p -= lr * mh / (std::sqrt(vh) + eps);
  }
  return p;
}

}  // namespace oracle
