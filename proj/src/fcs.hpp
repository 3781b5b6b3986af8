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

#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace fcsent::fcs {

/// States on more than this many composite dimensions are refused.
inline constexpr linalg::Index kDimensionCap = 4096;

struct NotPureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A translation-invariant pure finitely correlated state, defined by the
/// isometry v : C^d (x) C^b -> C^b stored as a b x (d*b) matrix. The column
/// composite index is k*b + beta (spin factor varies slowest), so the k-th
/// Kraus slice is the contiguous block v(:, k*b .. k*b+b-1).
struct FcsModel {
  linalg::Index d = 0;  // spin dimension
  linalg::Index b = 0;  // memory dimension
  linalg::Matrix v;

  FcsModel(linalg::Index d_, linalg::Index b_, linalg::Matrix v_);
};

struct ValidationReport {
  bool isometry_ok = false;
  bool unital_ok = false;
  bool pure_ok = false;
  double isometry_deviation = 0.0;  // max |v v^dagger - 1|
  double unital_deviation = 0.0;    // max |E_hat(1) - 1|
  double second_modulus = 0.0;      // |lambda_2| of the transfer operator
  int peripheral_count = 0;         // eigenvalues with modulus >= 1 - tol_peripheral

  bool all() const { return isometry_ok && unital_ok && pure_ok; }
};

ValidationReport validate(const FcsModel& model, double tol = linalg::kTol.hermitian);

using KrausSlices = std::vector<linalg::Matrix>;

KrausSlices kraus_slices(const FcsModel& model);

/// E_hat(B) = sum_k V_k B V_k^dagger.
linalg::Matrix apply_E_hat(const KrausSlices& slices, const linalg::Matrix& B);

/// Trace dual, E_hat*(rho) = sum_k V_k^dagger rho V_k.
linalg::Matrix apply_E_dual(const KrausSlices& slices, const linalg::Matrix& rho);

/// Column-stacking vectorization and its inverse.
linalg::Vector vec(const linalg::Matrix& m);
linalg::Matrix unvec(const linalg::Vector& v, linalg::Index rows);

struct TransferOperator {
  linalg::Index b = 0;
  linalg::Matrix matrix;       // b^2 x b^2, acts on column-vectorized B
  linalg::Matrix dual_matrix;  // adjoint with respect to the trace pairing
  linalg::Spectrum spectrum;   // of `matrix`, descending modulus
};

TransferOperator transfer_operator(const FcsModel& model);

struct FixedPoint {
  linalg::DensityMatrix rho;
  double min_eigenvalue = 0.0;
};

/// Unique full-rank stationary state of the trace dual. Requires a trivial
/// peripheral spectrum; cross-checked against power iteration when the dense
/// eigenproblem residual is not already tight.
FixedPoint fixed_point(const TransferOperator& top, double tol = 1e-9);

/// rho_AB = v^dagger rho v on dims (d, b): the joint state of one spin and
/// the memory.
linalg::DensityMatrix memory_state(const FcsModel& model, const FixedPoint& fp);

/// State of n consecutive spins, dims (d, ..., d). Entries are
/// <i_1..i_n| rho |j_1..j_n> = Tr(rho V_{j_1}..V_{j_n} V_{i_n}^+..V_{i_1}^+).
linalg::DensityMatrix rho_interval(const FcsModel& model, const FixedPoint& fp,
                                   int n, linalg::Index cap = kDimensionCap);

/// Joint state of the spin at site 1 and the spins at sites [p, n], built by
/// inserting E_hat^(p-2) across the gap so the d^n-dimensional intermediate
/// is never formed. dims (d, d, ..., d) with n - p + 2 factors.
linalg::DensityMatrix rho_spin_and_distant(const FcsModel& model, const FixedPoint& fp,
                                           int p, int n, linalg::Index cap = kDimensionCap);

/// rho_1 (x) rho_[p,n]: the reference state the distant-interval state
/// converges to as p grows.
linalg::DensityMatrix factorized_reference(const FcsModel& model, const FixedPoint& fp,
                                           int p, int n, linalg::Index cap = kDimensionCap);

}  // namespace fcsent::fcs
