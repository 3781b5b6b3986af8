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

#include "fcs.hpp"
#include "linalg.hpp"

namespace fcsent::ent {

/// A convex decomposition sigma = sum_i p_i |psi_i><psi_i|.
struct Ensemble {
  std::vector<double> weights;  // positive, sum 1
  linalg::Matrix states;        // unit columns on the composite space
};

struct EofOptions {
  /// Number of ensemble members L. 0 selects r^2 (r = rank of sigma),
  /// clamped to at most 32 members for large ranks; always at least r.
  int ensemble_size = 0;
  int restarts = 16;
  std::uint64_t seed = 1234567;
  int max_iters = 1000;
  /// Stop when the objective improves by less than this over 50 iterations.
  double tol = 1e-8;
  int threads = 1;
};

struct EofResult {
  double value = 0.0;  // nats
  Ensemble ensemble;
  int restarts_used = 0;
  double best_restart_spread = 0.0;  // max - min over restart outcomes
};

/// Upper bound on the entanglement of formation of a bipartite state with
/// dims (dA, dB), by multi-restart local descent over ensembles
/// |Psi_l> = sum_j U_{l,j} sqrt(e_j) |e_j> with U an L x r isometry drawn
/// from the eigen-decomposition of sigma.
EofResult eof_optimize(const linalg::DensityMatrix& sigma, const EofOptions& opts = {});

/// Wootters concurrence of a two-qubit state.
double concurrence(const linalg::DensityMatrix& sigma);

/// Closed-form two-qubit entanglement of formation in nats.
double eof_from_concurrence(const linalg::DensityMatrix& sigma);
double eof_for_concurrence_value(double c);

linalg::Matrix partial_transpose(const linalg::Matrix& m, linalg::Index da,
                                 linalg::Index db);

struct PptResult {
  double min_pt_eigenvalue = 0.0;
  double negativity = 0.0;  // (||sigma^T_B||_1 - 1) / 2
  bool is_ppt = false;
};

PptResult ppt_check(const linalg::DensityMatrix& sigma);

enum class Separability { Separable, Entangled };

/// Separability of the spin-memory state rho_AB. Since rank(rho_AB) = b,
/// a positive partial transpose already implies separability, so the PPT
/// verdict is exact here.
Separability memory_separability(const fcs::FcsModel& model);

/// Entropy continuity bound (ln dA + 2) T + eta(T) with T = ||rho - sigma||_1.
/// When monotone_regime is supplied it reports whether T <= 1/e, where the
/// eta term is increasing.
double fannes_bound(const linalg::DensityMatrix& rho, const linalg::DensityMatrix& sigma,
                    bool* monotone_regime = nullptr);

/// Continuity envelope for the entanglement of formation in trace distance:
///
///   |E(a) - E(b)| <= delta ln(min(dA, dB)) + (1 + delta) h(delta / (1 + delta))
///
/// with eps = ||a - b||_1 / 2 and delta = sqrt(eps (2 - eps)), h the binary
/// entropy in nats. This is Winter's sharpened form (Commun. Math. Phys. 347,
/// 291 (2016), Corollary 4) of Nielsen's EoF continuity bound
/// (Phys. Rev. A 61, 064301 (2000)); any value certified against it is also
/// certified against the original.
double eof_continuity_bound(const linalg::DensityMatrix& a, const linalg::DensityMatrix& b);

}  // namespace fcsent::ent
