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

#include "fcs.hpp"

#include <cmath>
#include <sstream>

namespace fcsent::fcs {

using linalg::Complex;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

FcsModel::FcsModel(Index d_, Index b_, Matrix v_) : d(d_), b(b_), v(std::move(v_)) {
  if (d < 1 || b < 1)
    throw std::invalid_argument("FcsModel: dimensions must be >= 1");
  if (v.rows() != b || v.cols() != d * b) {
    std::ostringstream msg;
    msg << "FcsModel: v must be " << b << " x " << d * b << ", got " << v.rows()
        << " x " << v.cols();
    throw std::invalid_argument(msg.str());
  }
}

ValidationReport validate(const FcsModel& model, double tol) {
  ValidationReport rep;
  const Matrix vv = model.v * model.v.adjoint();
  rep.isometry_deviation = linalg::max_abs(vv - Matrix::Identity(model.b, model.b));
  rep.isometry_ok = rep.isometry_deviation <= tol;

  const KrausSlices slices = kraus_slices(model);
  const Matrix e_one = apply_E_hat(slices, Matrix::Identity(model.b, model.b));
  rep.unital_deviation = linalg::max_abs(e_one - Matrix::Identity(model.b, model.b));
  rep.unital_ok = rep.unital_deviation <= tol;

  const TransferOperator top = transfer_operator(model);
  int peripheral = 0;
  for (std::size_t i = 0; i < top.spectrum.eigenvalues.size(); ++i)
    if (top.spectrum.modulus(i) >= 1.0 - linalg::kTol.peripheral) ++peripheral;
  rep.peripheral_count = peripheral;
  rep.second_modulus =
      top.spectrum.eigenvalues.size() > 1 ? top.spectrum.modulus(1) : 0.0;
  rep.pure_ok = peripheral == 1;
  return rep;
}

KrausSlices kraus_slices(const FcsModel& model) {
  KrausSlices slices;
  slices.reserve(static_cast<std::size_t>(model.d));
  for (Index k = 0; k < model.d; ++k)
    slices.push_back(model.v.block(0, k * model.b, model.b, model.b));
  return slices;
}

linalg::Matrix apply_E_hat(const KrausSlices& slices, const Matrix& B) {
  if (slices.empty()) throw std::invalid_argument("apply_E_hat: no slices");
  const Index b = slices.front().rows();
  if (B.rows() != b || B.cols() != b)
    throw std::invalid_argument("apply_E_hat: operand has wrong dimension");
  Matrix out = Matrix::Zero(b, b);
  for (const Matrix& vk : slices) out += vk * B * vk.adjoint();
  return out;
}

linalg::Matrix apply_E_dual(const KrausSlices& slices, const Matrix& rho) {
  if (slices.empty()) throw std::invalid_argument("apply_E_dual: no slices");
  const Index b = slices.front().rows();
  if (rho.rows() != b || rho.cols() != b)
    throw std::invalid_argument("apply_E_dual: operand has wrong dimension");
  Matrix out = Matrix::Zero(b, b);
  for (const Matrix& vk : slices) out += vk.adjoint() * rho * vk;
  return out;
}

linalg::Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

linalg::Matrix unvec(const Vector& v, Index rows) {
  if (v.size() % rows != 0) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

TransferOperator transfer_operator(const FcsModel& model) {
  const KrausSlices slices = kraus_slices(model);
  const Index b = model.b;
  // vec(V B V^dagger) = (conj(V) kron V) vec(B) for column stacking.
  Matrix m = Matrix::Zero(b * b, b * b);
  for (const Matrix& vk : slices) m += linalg::kron(vk.conjugate(), vk);
  TransferOperator top;
  top.b = b;
  top.matrix = std::move(m);
  top.dual_matrix = top.matrix.adjoint();
  top.spectrum = linalg::general_spectrum(top.matrix);
  return top;
}

namespace {

Matrix fixed_point_by_power_iteration(const TransferOperator& top, double tol,
                                      int max_iters) {
  const Index b = top.b;
  Matrix rho = Matrix::Identity(b, b) / static_cast<double>(b);
  for (int it = 0; it < max_iters; ++it) {
    Matrix next = unvec(top.dual_matrix * vec(rho), b);
    next = 0.5 * (next + next.adjoint());
    next /= next.trace().real();
    if (linalg::max_abs(next - rho) < 0.1 * tol) return next;
    rho = std::move(next);
  }
  throw NoConvergenceError("fixed_point: power iteration stalled");
}

}  // namespace

FixedPoint fixed_point(const TransferOperator& top, double tol) {
  int peripheral = 0;
  for (std::size_t i = 0; i < top.spectrum.eigenvalues.size(); ++i)
    if (top.spectrum.modulus(i) >= 1.0 - linalg::kTol.peripheral) ++peripheral;
  if (peripheral != 1) {
    std::ostringstream msg;
    msg << "fixed_point: peripheral spectrum has " << peripheral
        << " eigenvalues, expected exactly 1";
    throw NotPureError(msg.str());
  }

  const Index b = top.b;
  const linalg::Spectrum dual = linalg::general_spectrum(top.dual_matrix);
  Matrix rho = unvec(dual.eigenvectors.col(0), b);
  rho = 0.5 * (rho + rho.adjoint());
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-14)
    throw NoConvergenceError("fixed_point: stationary eigenvector has zero trace");
  rho /= tr;

  auto residual = [&](const Matrix& r) {
    return linalg::trace_norm(unvec(top.dual_matrix * vec(r), b) - r);
  };
  if (residual(rho) > tol) rho = fixed_point_by_power_iteration(top, tol, 100000);

  // Polish: each dual application contracts the deviation by |lambda_2|.
  double best_res = residual(rho);
  Matrix iterate = rho;
  for (int it = 0; it < 500 && best_res > 1e-14; ++it) {
    iterate = unvec(top.dual_matrix * vec(iterate), b);
    iterate = 0.5 * (iterate + iterate.adjoint());
    iterate /= iterate.trace().real();
    const double res = residual(iterate);
    if (res < best_res) {
      best_res = res;
      rho = iterate;
    }
  }
  if (best_res > tol)
    throw NoConvergenceError("fixed_point: stationary state residual above tolerance");

  const double min_eig = linalg::min_eigenvalue(rho);
  if (min_eig <= linalg::kTol.degeneracy)
    throw NoConvergenceError("fixed_point: stationary state is singular");
  return {linalg::DensityMatrix(rho, {b}), min_eig};
}

linalg::DensityMatrix memory_state(const FcsModel& model, const FixedPoint& fp) {
  Matrix m = model.v.adjoint() * fp.rho.matrix() * model.v;
  m = 0.5 * (m + m.adjoint());
  return linalg::DensityMatrix(std::move(m), {model.d, model.b});
}

linalg::DensityMatrix rho_interval(const FcsModel& model, const FixedPoint& fp,
                                   int n, Index cap) {
  if (n < 1) throw std::invalid_argument("rho_interval: n must be >= 1");
  double dims = std::pow(static_cast<double>(model.d), n);
  if (dims > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "rho_interval: d^n = " << dims << " exceeds cap " << cap;
    throw DimensionCapError(msg.str());
  }

  const KrausSlices slices = kraus_slices(model);
  const Index d = model.d, b = model.b;

  // S_m has block (i, j) = K_i^dagger rho K_j over composite spin indices of
  // length m, K_i = V_{i_1} ... V_{i_m}. Recursion appends one site:
  // S_m[(i,k),(j,l)] = V_k^dagger S_{m-1}(i,j) V_l.
  // Grow S up to length n-1; the n-th site is folded into the trace below.
  Matrix s = model.v.adjoint() * fp.rho.matrix() * model.v;  // S_1, (d*b)^2
  Index blocks = d;                                          // d^m so far
  for (int m = 2; m <= n - 1; ++m) {
    Matrix next(blocks * d * b, blocks * d * b);
    for (Index i = 0; i < blocks; ++i)
      for (Index j = 0; j < blocks; ++j) {
        const Matrix& sij = s.block(i * b, j * b, b, b);
        for (Index k = 0; k < d; ++k)
          for (Index l = 0; l < d; ++l)
            next.block((i * d + k) * b, (j * d + l) * b, b, b) =
                slices[static_cast<std::size_t>(k)].adjoint() * sij *
                slices[static_cast<std::size_t>(l)];
      }
    s = std::move(next);
    blocks *= d;
  }

  const Index dim = blocks * (n == 1 ? 1 : d);
  Matrix out(dim, dim);
  if (n == 1) {
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) out(i, j) = s.block(i * b, j * b, b, b).trace();
  } else {
    for (Index i = 0; i < blocks; ++i)
      for (Index j = 0; j < blocks; ++j) {
        const Matrix& sij = s.block(i * b, j * b, b, b);
        for (Index k = 0; k < d; ++k) {
          const Matrix t = slices[static_cast<std::size_t>(k)].adjoint() * sij;
          for (Index l = 0; l < d; ++l)
            out(i * d + k, j * d + l) =
                (t * slices[static_cast<std::size_t>(l)]).trace();
        }
      }
  }
  out = 0.5 * (out + out.adjoint());
  return linalg::DensityMatrix(std::move(out), std::vector<Index>(n, d));
}

linalg::DensityMatrix rho_spin_and_distant(const FcsModel& model, const FixedPoint& fp,
                                           int p, int n, Index cap) {
  if (p < 2 || n < p)
    throw std::invalid_argument("rho_spin_and_distant: need 2 <= p <= n");
  const int m = n - p + 1;  // interval length
  const double dims = std::pow(static_cast<double>(model.d), m + 1);
  if (dims > static_cast<double>(cap)) {
    std::ostringstream msg;
    msg << "rho_spin_and_distant: d^(n-p+2) = " << dims << " exceeds cap " << cap;
    throw DimensionCapError(msg.str());
  }

  const KrausSlices slices = kraus_slices(model);
  const Index d = model.d, b = model.b;

  // N_m(i, j) = P_j P_i^dagger with P_i = V_{i_p} ... V_{i_n}; site p owns the
  // slowest composite index.
  Index blocks = 1;
  Matrix nb = Matrix::Identity(b, b);
  for (int step = 0; step < m; ++step) {
    Matrix next(blocks * d * b, blocks * d * b);
    for (Index i = 0; i < blocks; ++i)
      for (Index j = 0; j < blocks; ++j) {
        const Matrix& nij = nb.block(i * b, j * b, b, b);
        for (Index k = 0; k < d; ++k)
          for (Index l = 0; l < d; ++l)
            next.block((k * blocks + i) * b, (l * blocks + j) * b, b, b) =
                slices[static_cast<std::size_t>(l)] * nij *
                slices[static_cast<std::size_t>(k)].adjoint();
      }
    nb = std::move(next);
    blocks *= d;
  }

  // E_hat^(p-2) applied blockwise across the gap.
  const TransferOperator top = transfer_operator(model);
  Matrix power = Matrix::Identity(b * b, b * b);
  for (int k = 0; k < p - 2; ++k) power = top.matrix * power;
  for (Index i = 0; i < blocks; ++i)
    for (Index j = 0; j < blocks; ++j)
      nb.block(i * b, j * b, b, b) =
          unvec(power * vec(nb.block(i * b, j * b, b, b)), b);

  // Entry = Tr(rho V_{j_1} Z(i,j) V_{i_1}^dagger) = Tr(A_{i_1 j_1} Z(i,j)).
  std::vector<Matrix> a(static_cast<std::size_t>(d * d));
  for (Index i1 = 0; i1 < d; ++i1)
    for (Index j1 = 0; j1 < d; ++j1)
      a[static_cast<std::size_t>(i1 * d + j1)] =
          slices[static_cast<std::size_t>(i1)].adjoint() * fp.rho.matrix() *
          slices[static_cast<std::size_t>(j1)];

  const Index dim = d * blocks;
  Matrix out(dim, dim);
  for (Index i1 = 0; i1 < d; ++i1)
    for (Index j1 = 0; j1 < d; ++j1) {
      const Matrix& aij = a[static_cast<std::size_t>(i1 * d + j1)];
      for (Index i = 0; i < blocks; ++i)
        for (Index j = 0; j < blocks; ++j)
          out(i1 * blocks + i, j1 * blocks + j) =
              (aij * nb.block(i * b, j * b, b, b)).trace();
    }
  out = 0.5 * (out + out.adjoint());
  return linalg::DensityMatrix(std::move(out), std::vector<Index>(m + 1, d));
}

linalg::DensityMatrix factorized_reference(const FcsModel& model, const FixedPoint& fp,
                                           int p, int n, Index cap) {
  if (p < 2 || n < p)
    throw std::invalid_argument("factorized_reference: need 2 <= p <= n");
  const int m = n - p + 1;
  const double dims = std::pow(static_cast<double>(model.d), m + 1);
  if (dims > static_cast<double>(cap))
    throw DimensionCapError("factorized_reference: dimension cap exceeded");
  const linalg::DensityMatrix one = rho_interval(model, fp, 1, cap);
  const linalg::DensityMatrix interval = rho_interval(model, fp, m, cap);
  Matrix out = linalg::kron(one.matrix(), interval.matrix());
  out = 0.5 * (out + out.adjoint());
  return linalg::DensityMatrix(std::move(out), std::vector<Index>(m + 1, model.d));
}

}  // namespace fcsent::fcs
