// Copyright 2026 The fcsent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "linalg.hpp"

namespace fcsent::rng {

// mt19937_64 with hand-rolled transforms so that streams are reproducible
// byte-for-byte independent of the standard library's distribution details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return std::ldexp(static_cast<double>(engine_() >> 11), -53);
  }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  linalg::Complex complex_gaussian() {
    const double re = gaussian(), im = gaussian();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }

  linalg::Matrix gaussian_matrix(linalg::Index rows, linalg::Index cols) {
    linalg::Matrix m(rows, cols);
    for (linalg::Index i = 0; i < rows; ++i)
      for (linalg::Index j = 0; j < cols; ++j) m(i, j) = complex_gaussian();
    return m;
  }

  linalg::Vector unit_vector(linalg::Index n) {
    linalg::Vector v(n);
    double norm2 = 0.0;
    do {
      for (linalg::Index i = 0; i < n; ++i) v(i) = complex_gaussian();
      norm2 = v.squaredNorm();
    } while (norm2 <= 0.0);
    return v / std::sqrt(norm2);
  }

  /// Haar-distributed unitary (QR of a Ginibre matrix, phases fixed).
  linalg::Matrix haar_unitary(linalg::Index n) {
    linalg::Matrix g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<linalg::Matrix> qr(g);
    linalg::Matrix q = qr.householderQ();
    linalg::Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (linalg::Index i = 0; i < n; ++i) {
      const double a = std::abs(r(i, i));
      if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
  }

  /// n x k matrix with orthonormal columns (k <= n).
  linalg::Matrix haar_isometry(linalg::Index n, linalg::Index k) {
    return haar_unitary(n).leftCols(k);
  }

  /// Random density matrix of the given dimension (Ginibre ensemble).
  linalg::Matrix ginibre_state(linalg::Index n) {
    linalg::Matrix g = gaussian_matrix(n, n);
    linalg::Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fcsent::rng
