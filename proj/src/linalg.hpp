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

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace fcsent::linalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// All numeric tolerances used by the library, collected in one record.
struct Tolerances {
  double hermitian = 1e-10;       // max abs deviation from m == m^dagger
  double trace_one = 1e-10;       // |Tr(rho) - 1|
  double positivity = -1e-10;     // smallest admissible eigenvalue of a state
  double reconstruction = 1e-9;   // eigendecomposition residual
  double degeneracy = 1e-12;      // eigenvalues closer than this are degenerate
  double rank_cut = 1e-10;        // eigenvalues above this count toward rank
  double peripheral = 1e-8;       // |lambda| >= 1 - peripheral is peripheral
};

inline constexpr Tolerances kTol{};

/// Kronecker product; the first factor owns the slow composite index.
Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kTol.hermitian);

double max_abs(const Matrix& m);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& m);

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns, m = V diag(values) V^dagger
};

/// Eigendecomposition of a Hermitian matrix. Throws std::invalid_argument
/// when the input fails the hermiticity tolerance.
EigenSystem hermitian_eig(const Matrix& m);

struct Spectrum {
  std::vector<Complex> eigenvalues;  // sorted by descending modulus
  Matrix eigenvectors;               // matching right eigenvectors (may be empty)

  double modulus(std::size_t i) const { return std::abs(eigenvalues.at(i)); }
};

/// Full spectrum of a general square matrix, sorted by descending modulus.
Spectrum general_spectrum(const Matrix& m, bool with_vectors = true);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// A positive unit-trace matrix together with its tensor-factor dimensions.
/// Hermiticity, trace and the dimension product are enforced on construction;
/// positivity is checked by the operations that need the eigenvalues anyway.
class DensityMatrix {
 public:
  DensityMatrix(Matrix m, std::vector<Index> dims);

  static DensityMatrix pure(const Vector& psi, std::vector<Index> dims);

  const Matrix& matrix() const { return matrix_; }
  const std::vector<Index>& dims() const { return dims_; }
  Index dim() const { return matrix_.rows(); }

  /// Same matrix re-partitioned into different tensor factors.
  DensityMatrix regrouped(std::vector<Index> dims) const;

 private:
  Matrix matrix_;
  std::vector<Index> dims_;
};

/// Reduced state on the kept factors (indices into dims, order preserved).
DensityMatrix partial_trace(const DensityMatrix& m, const std::vector<int>& keep);

/// -Tr(rho ln rho) in nats. Throws when rho has an eigenvalue below the
/// positivity tolerance.
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy from a Hermitian PSD matrix without the DensityMatrix wrapper
/// (trace need not be one; eigenvalues are used as-is after clamping).
double entropy_of_eigenvalues(const RealVector& p);

/// eta(x) = -x ln x, continuously extended by eta(0) = 0.
double eta(double x);

/// Binary entropy -x ln x - (1-x) ln(1-x) in nats.
double binary_entropy(double x);

}  // namespace fcsent::linalg
