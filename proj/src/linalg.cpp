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

#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fcsent::linalg {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

EigenSystem hermitian_eig(const Matrix& m) {
  if (!is_hermitian(m)) {
    std::ostringstream msg;
    msg << "hermitian_eig: input deviates from Hermitian by "
        << max_abs(m - m.adjoint());
    throw std::invalid_argument(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Spectrum general_spectrum(const Matrix& m, bool with_vectors) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("general_spectrum: matrix must be square");
  Eigen::ComplexEigenSolver<Matrix> solver(m, with_vectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("general_spectrum: eigensolver failed to converge");

  const Vector& vals = solver.eigenvalues();
  std::vector<Index> order(static_cast<std::size_t>(vals.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    const double ai = std::abs(vals(i)), aj = std::abs(vals(j));
    if (ai != aj) return ai > aj;
    if (vals(i).real() != vals(j).real()) return vals(i).real() > vals(j).real();
    return vals(i).imag() > vals(j).imag();
  });

  Spectrum s;
  s.eigenvalues.reserve(order.size());
  if (with_vectors) s.eigenvectors.resize(m.rows(), m.cols());
  for (std::size_t k = 0; k < order.size(); ++k) {
    s.eigenvalues.push_back(vals(order[k]));
    if (with_vectors) s.eigenvectors.col(static_cast<Index>(k)) = solver.eigenvectors().col(order[k]);
  }
  return s;
}

double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("trace_norm: matrix must be square");
  if (m.rows() <= 32) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues().sum();
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

DensityMatrix::DensityMatrix(Matrix m, std::vector<Index> dims)
    : matrix_(std::move(m)), dims_(std::move(dims)) {
  if (matrix_.rows() != matrix_.cols())
    throw std::invalid_argument("DensityMatrix: matrix must be square");
  Index prod = 1;
  for (Index d : dims_) {
    if (d < 1) throw std::invalid_argument("DensityMatrix: factor dims must be >= 1");
    prod *= d;
  }
  if (prod != matrix_.rows())
    throw std::invalid_argument("DensityMatrix: product of dims != matrix dimension");
  if (!is_hermitian(matrix_))
    throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within tolerance");
  const double tr_dev = std::abs(matrix_.trace() - Complex(1.0, 0.0));
  if (tr_dev > kTol.trace_one) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace deviates from 1 by " << tr_dev;
    throw std::invalid_argument(msg.str());
  }
}

DensityMatrix DensityMatrix::pure(const Vector& psi, std::vector<Index> dims) {
  const double norm = psi.norm();
  if (norm <= 0.0) throw std::invalid_argument("DensityMatrix::pure: zero vector");
  Vector unit = psi / norm;
  return DensityMatrix(unit * unit.adjoint(), std::move(dims));
}

DensityMatrix DensityMatrix::regrouped(std::vector<Index> dims) const {
  return DensityMatrix(matrix_, std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& m, const std::vector<int>& keep) {
  const auto& dims = m.dims();
  const int nfac = static_cast<int>(dims.size());

  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (int f : kept)
    if (f < 0 || f >= nfac)
      throw std::out_of_range("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int f = 0; f < nfac; ++f)
    if (!std::binary_search(kept.begin(), kept.end(), f)) traced.push_back(f);

  std::vector<Index> strides(static_cast<std::size_t>(nfac), 1);
  for (int f = nfac - 2; f >= 0; --f) strides[f] = strides[f + 1] * dims[f + 1];

  // Composite offsets of every kept and every traced multi-index.
  auto offsets = [&](const std::vector<int>& factors) {
    Index count = 1;
    for (int f : factors) count *= dims[f];
    std::vector<Index> base(static_cast<std::size_t>(count), 0);
    for (Index x = 0; x < count; ++x) {
      Index rem = x, off = 0;
      for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
        off += (rem % dims[*it]) * strides[*it];
        rem /= dims[*it];
      }
      base[static_cast<std::size_t>(x)] = off;
    }
    return base;
  };

  const std::vector<Index> kept_off = offsets(kept);
  const std::vector<Index> traced_off = offsets(traced);

  const Index K = static_cast<Index>(kept_off.size());
  Matrix out = Matrix::Zero(K, K);
  const Matrix& in = m.matrix();
  for (Index i = 0; i < K; ++i)
    for (Index j = 0; j < K; ++j) {
      Complex acc(0.0, 0.0);
      for (Index t : traced_off) acc += in(kept_off[i] + t, kept_off[j] + t);
      out(i, j) = acc;
    }

  std::vector<Index> out_dims;
  for (int f : kept) out_dims.push_back(dims[f]);
  if (out_dims.empty()) out_dims.push_back(1);
  return DensityMatrix(std::move(out), std::move(out_dims));
}

double von_neumann_entropy(const DensityMatrix& rho) {
  EigenSystem es = hermitian_eig(rho.matrix());
  if (es.values.minCoeff() < kTol.positivity) {
    std::ostringstream msg;
    msg << "von_neumann_entropy: state has eigenvalue " << es.values.minCoeff();
    throw std::invalid_argument(msg.str());
  }
  return entropy_of_eigenvalues(es.values);
}

double entropy_of_eigenvalues(const RealVector& p) {
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i)
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  return s;
}

double eta(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

double binary_entropy(double x) { return eta(x) + eta(1.0 - x); }

}  // namespace fcsent::linalg
