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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entanglement.hpp"
#include "fcs.hpp"

namespace fcsent::bounds {

/// Constants of the spectral convergence envelope: for every n >= 1,
/// ||E_hat^n - E_hat^inf|| <= c lambda^n with lambda above the second-largest
/// transfer eigenvalue modulus. c is a numerical estimate, c1 = c b^2 / lambda,
/// and n0 is the first n with 2 c1 lambda^n <= 1/e.
struct EnvelopeParams {
  double lambda = 0.5;
  double c = 0.0;
  double c1 = 0.0;
  int d = 0;
  int b = 0;
  int n0 = 1;
};

/// lambda = min(1 - 1e-9, |lambda_2| (1 + margin)). A missing or numerically
/// zero second eigenvalue (b = 1, or an exactly one-step-mixing channel)
/// falls back to 0.5. Throws NotPureError when the peripheral spectrum is
/// not trivial.
double spectral_gap(const fcs::TransferOperator& top, double margin = 0.05);

struct NormOptions {
  int samples = 200;
  int ascent_rounds = 60;
  std::uint64_t seed = 777;
};

/// Estimate of the induced 1->1 norm of a superoperator on b x b matrices
/// (given in column-stacking matrix form) by maximizing ||Phi(|u><v|)||_1
/// over sampled rank-one inputs, Hermitian and general, plus hill climbing.
/// A lower estimate of the true norm, flagged as estimated in reports.
double induced_trace_norm(const linalg::Matrix& superop, linalg::Index b,
                          const NormOptions& opts = {});

/// Powers of the transfer matrix and of its deviation D = M - M_inf, where
/// M_inf = vec(1_b) vec(rho)^dagger. D^n equals M^n - M_inf and stays
/// relatively accurate even when it is exponentially small.
class TransferPowers {
 public:
  TransferPowers(const fcs::TransferOperator& top, const fcs::FixedPoint& fp);

  const linalg::Matrix& deviation_power(int n);  // D^n, n >= 1
  linalg::Matrix channel_power(int n) const;     // M^n, n >= 0
  const linalg::Matrix& stationary_projector() const { return m_inf_; }

 private:
  linalg::Matrix m_;
  linalg::Matrix m_inf_;
  std::vector<linalg::Matrix> dev_powers_;  // dev_powers_[k] = D^(k+1)
};

/// c = max_{1 <= n <= n_max} ||E_hat^n - E_hat^inf|| / lambda^n.
double estimate_c(const fcs::TransferOperator& top, const fcs::FixedPoint& fp,
                  double lambda, int n_max = 30, const NormOptions& opts = {});

EnvelopeParams envelope_params(const fcs::FcsModel& model,
                               const fcs::TransferOperator& top,
                               const fcs::FixedPoint& fp, double margin = 0.05,
                               int n_max = 30, const NormOptions& opts = {});

int smallest_n0(double c1, double lambda);

/// (ln d^3 + 4) c1 lambda^n + eta(2 c1 lambda^n) for n >= n0; +infinity for
/// smaller n, where the eta term is outside its monotone regime.
double epsilon_envelope(const EnvelopeParams& params, int n);

struct ReportRow {
  int index = 0;  // n or p
  // verify_theorem1 columns
  double eof_memory = 0.0;
  double eof_interval = 0.0;
  double gap = 0.0;
  double envelope = 0.0;
  // verify_theorem2 columns
  double trace_distance = 0.0;
  double distance_envelope = 0.0;
  double nielsen_envelope = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  enum class Kind { Theorem1, Theorem2 };

  Kind kind = Kind::Theorem1;
  std::vector<ReportRow> rows;
  std::string model_name;
  std::string model_hash;
  double lambda = 0.0;
  double c = 0.0;
  double c1 = 0.0;
  int n0 = 1;
  std::uint64_t seed = 0;

  bool all_pass() const;
  /// Fixed column schema; entropy-valued columns divide by ln 2 when
  /// bits is set. Infinite envelopes print as "inf".
  std::string to_csv(bool bits = false) const;
  std::string to_json(bool bits = false) const;
};

struct RunOptions {
  ent::EofOptions eof;
  double tol_opt = 2e-3;  // absorbs optimizer noise on the lower bound
  double margin = 0.05;
  int c_n_max = 30;
  int threads = 1;
};

/// Per n in [n_min, n_max]: gap = EoF(rho_AB) - EoF(rho_[1,n]) across the
/// 1 | [2..n] cut, checked against -tol_opt <= gap <= epsilon_envelope(n).
ConvergenceReport verify_theorem1(const fcs::FcsModel& model, int n_min, int n_max,
                                  const RunOptions& opts = {});

/// Per p in [p_min, p_max] with n = p + n_offset: trace distance between
/// rho_{1,[p,n]} and rho_1 (x) rho_[p,n] against c' lambda^(p-2), and
/// EoF(rho_{1,[p,n]}) against the EoF continuity envelope at that distance.
ConvergenceReport verify_theorem2(const fcs::FcsModel& model, int p_min, int p_max,
                                  int n_offset, const RunOptions& opts = {});

struct DecayFit {
  double slope = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

/// Least-squares slope of ln(value) against n. Values at or below 1e-12 are
/// excluded; fewer than 3 usable points is an error.
DecayFit fit_decay_rate(const std::vector<std::pair<int, double>>& series);

struct TauChainRow {
  int member = 0;  // l
  double beta = 0.0;   // Tr psi~_l
  double alpha = 0.0;  // Tr phi~^n_l
  double lhs = 0.0;    // ||psi~_l - phi~^n_l||_1
  double rhs = 0.0;    // b^2 beta_l ||E_hat^(n-1) - E_hat^inf||
  double tau = 0.0;    // lhs / beta_l
  double entropy_psi = 0.0;
  double entropy_phi = 0.0;
  double entropy_diff = 0.0;
  double fannes = 0.0;  // bound on |S(psi_l) - S(phi_l^n)|
};

/// Explicit single-spin restrictions of the coupled ensembles generated by an
/// isometry u (L x b^2, orthonormal columns) over the doubled eigen-ensemble
/// index (i, j): phi~^n_l from the finite-n formula with E_hat^(n-1) across
/// the tail, psi~_l from the same formula with E_hat^inf substituted.
/// norm_estimate must be the estimated ||E_hat^(n-1) - E_hat^inf||.
std::vector<TauChainRow> tau_chain_rows(const fcs::FcsModel& model,
                                        const linalg::Matrix& u, int n,
                                        double norm_estimate);

}  // namespace fcsent::bounds
