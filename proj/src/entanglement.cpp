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

#include "entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <functional>
#include <numbers>
#include <sstream>

#include "parallel.hpp"
#include "rng.hpp"

namespace fcsent::ent {

using linalg::Complex;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

namespace {

double entropy_accumulate(const double* mu, int count) {
  double p = 0.0, s = 0.0;
  for (int i = 0; i < count; ++i)
    if (mu[i] > 0.0) {
      p += mu[i];
      s -= mu[i] * std::log(mu[i]);
    }
  if (p < 1e-14) return 0.0;
  return s + p * std::log(p);
}

double entropy_term(const Matrix& rho_unnorm) {
  // p * S(rho/p) for the unnormalized marginal, p = Tr(rho). Hot path of the
  // optimizer, so tiny dimensions get closed-form eigenvalues.
  const Index n = rho_unnorm.rows();
  if (n == 1) {
    const double mu = rho_unnorm(0, 0).real();
    return entropy_accumulate(&mu, 1);
  }
  if (n == 2) {
    const double a = rho_unnorm(0, 0).real(), c = rho_unnorm(1, 1).real();
    const double mean = 0.5 * (a + c);
    const double radius =
        std::sqrt(0.25 * (a - c) * (a - c) + std::norm(rho_unnorm(0, 1)));
    const double mu[2] = {mean - radius, mean + radius};
    return entropy_accumulate(mu, 2);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  if (n == 3)
    es.computeDirect(rho_unnorm, Eigen::EigenvaluesOnly);
  else
    es.compute(rho_unnorm, Eigen::EigenvaluesOnly);
  return entropy_accumulate(es.eigenvalues().data(),
                            static_cast<int>(es.eigenvalues().size()));
}

// Average-entropy objective over the ensemble defined by the first r columns
// of an L x L unitary acting on the weighted eigenvectors of sigma.
//
// The generators used for derivatives are Givens-type: they rotate two rows
// of U, hence mix exactly two ensemble members. A perturbed member marginal
// is a combination of the cached marginals and one cross Gram matrix, so a
// finite-difference evaluation never touches the full ensemble.
class EnsembleObjective {
 public:
  EnsembleObjective(Matrix ew, Index da, Index db, Index ensemble_size)
      : ew_(std::move(ew)), da_(da), db_(db), r_(ew_.cols()), big_l_(ensemble_size) {}

  Index parameter_count() const { return big_l_ * (big_l_ - 1); }

  void set_unitary(Matrix u) {
    u_ = std::move(u);
    refresh();
  }
  const Matrix& unitary() const { return u_; }
  double value() const { return value_; }

  // Central finite difference along every pair generator.
  Eigen::VectorXd gradient(double h) const {
    Eigen::VectorXd g(parameter_count());
    const double c = std::cos(h), s = std::sin(h);
    Index idx = 0;
    for (Index a = 0; a < big_l_; ++a)
      for (Index b = a + 1; b < big_l_; ++b) {
        if (weight_[static_cast<std::size_t>(a)] +
                weight_[static_cast<std::size_t>(b)] <
            1e-14) {
          g(idx++) = 0.0;
          g(idx++) = 0.0;
          continue;
        }
        const Matrix cross = m_[static_cast<std::size_t>(a)] *
                             m_[static_cast<std::size_t>(b)].adjoint();
        const Matrix sym = cross + cross.adjoint();
        const Matrix asym = Complex(0, 1) * (cross.adjoint() - cross);
        const Matrix& ra = rho_[static_cast<std::size_t>(a)];
        const Matrix& rb = rho_[static_cast<std::size_t>(b)];
        const Matrix base_a = c * c * ra + s * s * rb;
        const Matrix base_b = s * s * ra + c * c * rb;
        // rotation generator e_ab - e_ba
        g(idx++) = (entropy_term(base_a + (c * s) * sym) +
                    entropy_term(base_b - (c * s) * sym) -
                    entropy_term(base_a - (c * s) * sym) -
                    entropy_term(base_b + (c * s) * sym)) /
                   (2.0 * h);
        // generator i (e_ab + e_ba)
        g(idx++) = (entropy_term(base_a + (c * s) * asym) +
                    entropy_term(base_b - (c * s) * asym) -
                    entropy_term(base_a - (c * s) * asym) -
                    entropy_term(base_b + (c * s) * asym)) /
                   (2.0 * h);
      }
    return g;
  }

  // Anti-Hermitian matrix sum_k theta_k B_k over the pair generators.
  Matrix direction_matrix(const Eigen::VectorXd& theta) const {
    Matrix out = Matrix::Zero(big_l_, big_l_);
    Index idx = 0;
    for (Index a = 0; a < big_l_; ++a)
      for (Index b = a + 1; b < big_l_; ++b) {
        const double x = theta(idx++);
        const double y = theta(idx++);
        out(a, b) += Complex(x, y);
        out(b, a) += Complex(-x, y);
      }
    return out;
  }

  // exp(D) U for anti-Hermitian D, via the eigensystem of -iD.
  static Matrix advance(const Matrix& d, const Matrix& u) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Complex(0, -1) * d);
    Vector phases(es.eigenvalues().size());
    for (Index i = 0; i < phases.size(); ++i)
      phases(i) = std::exp(Complex(0, es.eigenvalues()(i)));
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint() * u;
  }

  double value_at(const Matrix& u) const {
    const Matrix psi = ew_ * u.leftCols(r_).transpose();
    double total = 0.0;
    for (Index l = 0; l < big_l_; ++l) {
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
          m(psi.col(l).data(), da_, db_);
      total += entropy_term(m * m.adjoint());
    }
    return total;
  }

  Ensemble ensemble() const {
    const Matrix psi = ew_ * u_.leftCols(r_).transpose();
    Ensemble out;
    std::vector<Index> kept;
    for (Index l = 0; l < big_l_; ++l)
      if (psi.col(l).squaredNorm() > 1e-12) kept.push_back(l);
    out.weights.reserve(kept.size());
    out.states.resize(psi.rows(), static_cast<Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
      const double p = psi.col(kept[k]).squaredNorm();
      out.weights.push_back(p);
      out.states.col(static_cast<Index>(k)) = psi.col(kept[k]) / std::sqrt(p);
    }
    return out;
  }

 private:
  void refresh() {
    psi_ = ew_ * u_.leftCols(r_).transpose();
    m_.clear();
    rho_.clear();
    weight_.clear();
    value_ = 0.0;
    for (Index l = 0; l < big_l_; ++l) {
      Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>
          map(psi_.col(l).data(), da_, db_);
      m_.push_back(map);
      rho_.push_back(m_.back() * m_.back().adjoint());
      weight_.push_back(rho_.back().trace().real());
      value_ += entropy_term(rho_.back());
    }
  }

  Matrix ew_;  // dim x r, eigenvectors scaled by sqrt(eigenvalue)
  Index da_, db_, r_, big_l_;
  Matrix u_;
  Matrix psi_;
  std::vector<Matrix> m_;        // per-member dA x dB reshapes
  std::vector<Matrix> rho_;      // per-member unnormalized marginals
  std::vector<double> weight_;   // per-member Tr(rho)
  double value_ = 0.0;
};

// L-BFGS descent in the moving local frame, Armijo backtracking.
double minimize(EnsembleObjective& obj, const EofOptions& opts) {
  constexpr double kFdStep = 1e-5;
  constexpr int kHistory = 6;
  constexpr int kWindow = 50;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  Eigen::VectorXd grad = obj.gradient(kFdStep);
  std::deque<double> window;
  double best = obj.value();

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (grad.lpNorm<Eigen::Infinity>() < 1e-9) break;

    // Two-loop recursion.
    Eigen::VectorXd dir = -grad;
    std::vector<double> alpha(s_hist.size());
    for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
      const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
      alpha[i] = rho_i * s_hist[i].dot(dir);
      dir -= alpha[i] * y_hist[i];
    }
    if (!s_hist.empty()) {
      const double gamma =
          s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
      if (gamma > 0.0) dir *= gamma;
    }
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double rho_i = 1.0 / y_hist[i].dot(s_hist[i]);
      const double beta = rho_i * y_hist[i].dot(dir);
      dir += (alpha[i] - beta) * s_hist[i];
    }
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = grad.dot(dir);
    }

    const Matrix d_unit = obj.direction_matrix(dir);
    double t = 1.0;
    const double f0 = obj.value();
    Matrix accepted;
    double f_new = f0;
    bool moved = false;
    for (int back = 0; back < 30; ++back) {
      const Matrix cand = EnsembleObjective::advance(t * d_unit, obj.unitary());
      const double f = obj.value_at(cand);
      if (f <= f0 + 1e-4 * t * slope) {
        accepted = cand;
        f_new = f;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;

    obj.set_unitary(accepted);
    Eigen::VectorXd grad_new = obj.gradient(kFdStep);
    Eigen::VectorXd s = t * dir;
    Eigen::VectorXd y = grad_new - grad;
    if (y.dot(s) > 1e-12) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      if (static_cast<int>(s_hist.size()) > kHistory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    grad = std::move(grad_new);

    best = std::min(best, f_new);
    window.push_back(f_new);
    if (static_cast<int>(window.size()) > kWindow) {
      const double old = window.front();
      window.pop_front();
      if (old - f_new < opts.tol) break;
    }
  }
  return best;
}

}  // namespace

EofResult eof_optimize(const linalg::DensityMatrix& sigma, const EofOptions& opts) {
  if (sigma.dims().size() != 2)
    throw std::invalid_argument("eof_optimize: state must carry dims (dA, dB)");
  const Index da = sigma.dims()[0], db = sigma.dims()[1];

  linalg::EigenSystem es = linalg::hermitian_eig(sigma.matrix());
  if (es.values.minCoeff() < linalg::kTol.positivity)
    throw std::invalid_argument("eof_optimize: state is not positive semidefinite");

  std::vector<Index> support;
  for (Index i = es.values.size() - 1; i >= 0; --i)
    if (es.values(i) > linalg::kTol.rank_cut) support.push_back(i);
  const Index r = static_cast<Index>(support.size());
  if (r == 0) throw std::invalid_argument("eof_optimize: state has empty support");

  Matrix ew(sigma.dim(), r);
  for (Index j = 0; j < r; ++j)
    ew.col(j) = es.vectors.col(support[static_cast<std::size_t>(j)]) *
                std::sqrt(es.values(support[static_cast<std::size_t>(j)]));

  EofResult result;
  if (r == 1 || da == 1 || db == 1) {
    // Pure (or trivially product-cut) case: the decomposition is unique up to
    // phases and the value is the marginal entropy of the eigen-ensemble.
    EnsembleObjective obj(ew, da, db, r);
    obj.set_unitary(Matrix::Identity(r, r));
    result.value = obj.value();
    result.ensemble = obj.ensemble();
    result.restarts_used = 0;
    result.best_restart_spread = 0.0;
    return result;
  }

  Index big_l;
  if (opts.ensemble_size > 0) {
    big_l = opts.ensemble_size;
    if (big_l < r) {
      std::ostringstream msg;
      msg << "eof_optimize: ensemble_size " << big_l << " below rank " << r;
      throw std::invalid_argument(msg.str());
    }
  } else {
    big_l = r * r <= 32 ? r * r : std::max<Index>(r, 32);
  }

  const int restarts = std::max(1, opts.restarts);
  std::vector<double> values(static_cast<std::size_t>(restarts));
  std::vector<Matrix> unitaries(static_cast<std::size_t>(restarts));

  parallel_for(restarts, opts.threads, [&](int k) {
    EnsembleObjective obj(ew, da, db, big_l);
    if (k == 0) {
      obj.set_unitary(Matrix::Identity(big_l, big_l));
    } else {
      rng::Rng gen(opts.seed + static_cast<std::uint64_t>(k));
      obj.set_unitary(gen.haar_unitary(big_l));
    }
    values[static_cast<std::size_t>(k)] = minimize(obj, opts);
    unitaries[static_cast<std::size_t>(k)] = obj.unitary();
  });

  int best = 0;
  for (int k = 1; k < restarts; ++k)
    if (values[static_cast<std::size_t>(k)] < values[static_cast<std::size_t>(best)])
      best = k;

  EnsembleObjective obj(ew, da, db, big_l);
  obj.set_unitary(unitaries[static_cast<std::size_t>(best)]);
  result.value = std::max(0.0, values[static_cast<std::size_t>(best)]);
  result.ensemble = obj.ensemble();
  result.restarts_used = restarts;
  result.best_restart_spread =
      *std::max_element(values.begin(), values.end()) -
      *std::min_element(values.begin(), values.end());
  return result;
}

double concurrence(const linalg::DensityMatrix& sigma) {
  if (sigma.dims().size() != 2 || sigma.dims()[0] != 2 || sigma.dims()[1] != 2)
    throw std::invalid_argument("concurrence: state must have dims (2, 2)");

  Matrix sy(2, 2);
  sy << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  const Matrix yy = linalg::kron(sy, sy);

  linalg::EigenSystem es = linalg::hermitian_eig(sigma.matrix());
  Matrix sqrt_sigma = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) {
    const double ev = std::max(0.0, es.values(i));
    sqrt_sigma += std::sqrt(ev) * es.vectors.col(i) * es.vectors.col(i).adjoint();
  }

  Matrix t = sqrt_sigma * yy * sigma.matrix().conjugate() * yy * sqrt_sigma;
  t = 0.5 * (t + t.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> ts(t, Eigen::EigenvaluesOnly);
  std::array<double, 4> mu{};
  for (Index i = 0; i < 4; ++i)
    mu[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, ts.eigenvalues()(i)));
  std::sort(mu.begin(), mu.end(), std::greater<>());
  return std::clamp(mu[0] - mu[1] - mu[2] - mu[3], 0.0, 1.0);
}

double eof_for_concurrence_value(double c) {
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  return linalg::binary_entropy(x);
}

double eof_from_concurrence(const linalg::DensityMatrix& sigma) {
  return eof_for_concurrence_value(concurrence(sigma));
}

linalg::Matrix partial_transpose(const Matrix& m, Index da, Index db) {
  if (m.rows() != da * db || m.cols() != da * db)
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  Matrix out(m.rows(), m.cols());
  for (Index a = 0; a < da; ++a)
    for (Index a2 = 0; a2 < da; ++a2)
      for (Index b = 0; b < db; ++b)
        for (Index b2 = 0; b2 < db; ++b2)
          out(a * db + b, a2 * db + b2) = m(a * db + b2, a2 * db + b);
  return out;
}

PptResult ppt_check(const linalg::DensityMatrix& sigma) {
  if (sigma.dims().size() != 2)
    throw std::invalid_argument("ppt_check: state must carry dims (dA, dB)");
  const Matrix pt =
      partial_transpose(sigma.matrix(), sigma.dims()[0], sigma.dims()[1]);
  PptResult res;
  res.min_pt_eigenvalue = linalg::min_eigenvalue(pt);
  res.negativity = std::max(0.0, 0.5 * (linalg::trace_norm(pt) - 1.0));
  res.is_ppt = res.min_pt_eigenvalue >= -1e-10;
  return res;
}

Separability memory_separability(const fcs::FcsModel& model) {
  const auto rep = fcs::validate(model);
  if (!rep.isometry_ok)
    throw std::invalid_argument("memory_separability: model is not an isometry");
  if (!rep.pure_ok)
    throw fcs::NotPureError("memory_separability: model is not pure");
  const auto top = fcs::transfer_operator(model);
  const auto fp = fcs::fixed_point(top);
  const auto rho_ab = fcs::memory_state(model, fp);
  return ppt_check(rho_ab).is_ppt ? Separability::Separable : Separability::Entangled;
}

double fannes_bound(const linalg::DensityMatrix& rho, const linalg::DensityMatrix& sigma,
                    bool* monotone_regime) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("fannes_bound: dimension mismatch");
  const double t = linalg::trace_norm(rho.matrix() - sigma.matrix());
  if (monotone_regime) *monotone_regime = t <= 1.0 / std::numbers::e;
  const double d = static_cast<double>(rho.dim());
  return (std::log(d) + 2.0) * t + linalg::eta(t);
}

double eof_continuity_bound(const linalg::DensityMatrix& a, const linalg::DensityMatrix& b) {
  if (a.dims().size() != 2 || b.dims().size() != 2 || a.dims() != b.dims())
    throw std::invalid_argument("eof_continuity_bound: states must share dims (dA, dB)");
  double eps = 0.5 * linalg::trace_norm(a.matrix() - b.matrix());
  eps = std::clamp(eps, 0.0, 1.0);
  const double delta = std::sqrt(eps * (2.0 - eps));
  const double dmin = static_cast<double>(std::min(a.dims()[0], a.dims()[1]));
  double bound = delta * std::log(dmin);
  if (delta > 0.0)
    bound += (1.0 + delta) * linalg::binary_entropy(delta / (1.0 + delta));
  return bound;
}

}  // namespace fcsent::ent
