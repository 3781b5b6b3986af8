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

#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "models.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace fcsent::bounds {

using linalg::Complex;
using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

double spectral_gap(const fcs::TransferOperator& top, double margin) {
  int peripheral = 0;
  for (std::size_t i = 0; i < top.spectrum.eigenvalues.size(); ++i)
    if (top.spectrum.modulus(i) >= 1.0 - linalg::kTol.peripheral) ++peripheral;
  if (peripheral != 1)
    throw fcs::NotPureError("spectral_gap: peripheral spectrum is not trivial");
  if (top.spectrum.eigenvalues.size() < 2) return 0.5;
  const double second = top.spectrum.modulus(1);
  if (second < 1e-12) return 0.5;
  return std::min(1.0 - 1e-9, second * (1.0 + margin));
}

namespace {

double rank_one_image_norm(const Matrix& superop, Index b, const Vector& u,
                           const Vector& v) {
  const Matrix input = u * v.adjoint();
  const Vector out = superop * fcs::vec(input);
  return linalg::trace_norm(fcs::unvec(out, b));
}

}  // namespace

double induced_trace_norm(const Matrix& superop, Index b, const NormOptions& opts) {
  if (superop.rows() != b * b || superop.cols() != b * b)
    throw std::invalid_argument("induced_trace_norm: superoperator shape mismatch");
  if (linalg::max_abs(superop) == 0.0) return 0.0;

  rng::Rng gen(opts.seed);
  Vector best_u, best_v;
  double best = -1.0;
  auto consider = [&](const Vector& u, const Vector& v) {
    const double val = rank_one_image_norm(superop, b, u, v);
    if (val > best) {
      best = val;
      best_u = u;
      best_v = v;
    }
  };

  // Basis rank-ones, then random Hermitian and general rank-ones.
  for (Index i = 0; i < b; ++i)
    for (Index j = 0; j < b; ++j) {
      Vector u = Vector::Zero(b), v = Vector::Zero(b);
      u(i) = 1.0;
      v(j) = 1.0;
      consider(u, v);
    }
  for (int s = 0; s < opts.samples; ++s) {
    const Vector u = gen.unit_vector(b);
    if (s % 2 == 0) {
      consider(u, u);
    } else {
      consider(u, gen.unit_vector(b));
    }
  }

  // Hill climb around the best candidate.
  double step = 0.3;
  for (int round = 0; round < opts.ascent_rounds; ++round) {
    for (int trial = 0; trial < 2; ++trial) {
      Vector u = best_u + step * gen.unit_vector(b);
      Vector v = best_v + step * gen.unit_vector(b);
      u.normalize();
      v.normalize();
      consider(u, v);
    }
    step *= 0.93;
  }
  return best;
}

TransferPowers::TransferPowers(const fcs::TransferOperator& top,
                               const fcs::FixedPoint& fp)
    : m_(top.matrix) {
  const Vector one = fcs::vec(Matrix::Identity(top.b, top.b));
  const Vector rho = fcs::vec(fp.rho.matrix());
  m_inf_ = one * rho.adjoint();
}

const Matrix& TransferPowers::deviation_power(int n) {
  if (n < 1) throw std::invalid_argument("deviation_power: n must be >= 1");
  if (dev_powers_.empty()) dev_powers_.push_back(m_ - m_inf_);
  while (static_cast<int>(dev_powers_.size()) < n)
    dev_powers_.push_back(dev_powers_.front() * dev_powers_.back());
  return dev_powers_[static_cast<std::size_t>(n - 1)];
}

Matrix TransferPowers::channel_power(int n) const {
  if (n < 0) throw std::invalid_argument("channel_power: n must be >= 0");
  Matrix out = Matrix::Identity(m_.rows(), m_.cols());
  for (int k = 0; k < n; ++k) out = m_ * out;
  return out;
}

double estimate_c(const fcs::TransferOperator& top, const fcs::FixedPoint& fp,
                  double lambda, int n_max, const NormOptions& opts) {
  TransferPowers powers(top, fp);
  double c = 0.0;
  double scale = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    scale *= lambda;
    const double norm = induced_trace_norm(powers.deviation_power(n), top.b, opts);
    c = std::max(c, norm / scale);
  }
  return c;
}

EnvelopeParams envelope_params(const fcs::FcsModel& model,
                               const fcs::TransferOperator& top,
                               const fcs::FixedPoint& fp, double margin, int n_max,
                               const NormOptions& opts) {
  EnvelopeParams params;
  params.d = static_cast<int>(model.d);
  params.b = static_cast<int>(model.b);
  params.lambda = spectral_gap(top, margin);
  params.c = estimate_c(top, fp, params.lambda, n_max, opts);
  params.c1 = params.c * static_cast<double>(model.b * model.b) / params.lambda;
  params.n0 = smallest_n0(params.c1, params.lambda);
  return params;
}

int smallest_n0(double c1, double lambda) {
  if (c1 <= 0.0) return 1;
  const double threshold = 1.0 / std::numbers::e;
  int n0 = 1;
  while (2.0 * c1 * std::pow(lambda, n0) > threshold) {
    ++n0;
    if (n0 > 100000)
      throw std::runtime_error("smallest_n0: condition never satisfied");
  }
  return n0;
}

double epsilon_envelope(const EnvelopeParams& params, int n) {
  if (n < 1) throw std::invalid_argument("epsilon_envelope: n must be >= 1");
  if (params.c1 <= 0.0) return 0.0;
  if (n < params.n0) return std::numeric_limits<double>::infinity();
  const double x = params.c1 * std::pow(params.lambda, n);
  return (3.0 * std::log(static_cast<double>(params.d)) + 4.0) * x +
         linalg::eta(2.0 * x);
}

bool ConvergenceReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const ReportRow& r) { return r.pass; });
}

namespace {

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json json_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

std::string ConvergenceReport::to_csv(bool bits) const {
  const double unit = bits ? kLn2 : 1.0;
  std::ostringstream out;
  if (kind == Kind::Theorem1) {
    out << "n,eof_memory,eof_interval,gap,envelope,pass\n";
    for (const ReportRow& r : rows)
      out << r.index << ',' << format_value(r.eof_memory / unit) << ','
          << format_value(r.eof_interval / unit) << ','
          << format_value(r.gap / unit) << ',' << format_value(r.envelope / unit)
          << ',' << (r.pass ? "true" : "false") << '\n';
  } else {
    out << "p,trace_distance,distance_envelope,eof_interval,nielsen_envelope,pass\n";
    for (const ReportRow& r : rows)
      out << r.index << ',' << format_value(r.trace_distance) << ','
          << format_value(r.distance_envelope) << ','
          << format_value(r.eof_interval / unit) << ','
          << format_value(r.nielsen_envelope / unit) << ','
          << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string ConvergenceReport::to_json(bool bits) const {
  const double unit = bits ? kLn2 : 1.0;
  nlohmann::ordered_json j;
  j["kind"] = kind == Kind::Theorem1 ? "converge" : "distant";
  j["units"] = bits ? "bits" : "nats";
  nlohmann::ordered_json meta;
  meta["model"] = model_name;
  meta["model_hash"] = model_hash;
  meta["lambda"] = lambda;
  meta["c"] = c;
  meta["c1"] = c1;
  meta["n0"] = n0;
  meta["seed"] = seed;
  // c has no closed form; every envelope derived from it is an estimate.
  meta["envelope_constants"] = "estimated";
  j["metadata"] = std::move(meta);
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const ReportRow& r : rows) {
    nlohmann::ordered_json row;
    if (kind == Kind::Theorem1) {
      row["n"] = r.index;
      row["eof_memory"] = json_value(r.eof_memory / unit);
      row["eof_interval"] = json_value(r.eof_interval / unit);
      row["gap"] = json_value(r.gap / unit);
      row["envelope"] = json_value(r.envelope / unit);
    } else {
      row["p"] = r.index;
      row["trace_distance"] = json_value(r.trace_distance);
      row["distance_envelope"] = json_value(r.distance_envelope);
      row["eof_interval"] = json_value(r.eof_interval / unit);
      row["nielsen_envelope"] = json_value(r.nielsen_envelope / unit);
    }
    row["pass"] = r.pass;
    rows_json.push_back(std::move(row));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(2);
}

namespace {

struct ModelContext {
  fcs::TransferOperator top;
  fcs::FixedPoint fp;
  EnvelopeParams params;
};

ModelContext make_context(const fcs::FcsModel& model, const RunOptions& opts) {
  const auto rep = fcs::validate(model);
  if (!rep.isometry_ok)
    throw std::invalid_argument("verify: model is not an isometry");
  if (!rep.pure_ok) throw fcs::NotPureError("verify: model is not pure");
  fcs::TransferOperator top = fcs::transfer_operator(model);
  fcs::FixedPoint fp = fcs::fixed_point(top);
  EnvelopeParams params =
      envelope_params(model, top, fp, opts.margin, opts.c_n_max);
  return {std::move(top), std::move(fp), params};
}

}  // namespace

ConvergenceReport verify_theorem1(const fcs::FcsModel& model, int n_min, int n_max,
                                  const RunOptions& opts) {
  if (n_min < 1 || n_max < n_min)
    throw std::invalid_argument("verify_theorem1: bad n range");
  ModelContext ctx = make_context(model, opts);

  ent::EofOptions eof_opts = opts.eof;
  eof_opts.threads = std::max(1, opts.threads);
  const double eof_memory =
      ent::eof_optimize(fcs::memory_state(model, ctx.fp), eof_opts).value;

  ConvergenceReport report;
  report.kind = ConvergenceReport::Kind::Theorem1;
  report.model_name = "";
  report.model_hash = models::model_hash(model);
  report.lambda = ctx.params.lambda;
  report.c = ctx.params.c;
  report.c1 = ctx.params.c1;
  report.n0 = ctx.params.n0;
  report.seed = opts.eof.seed;
  report.rows.resize(static_cast<std::size_t>(n_max - n_min + 1));

  const int count = n_max - n_min + 1;
  parallel_for(count, opts.threads, [&](int i) {
    const int n = n_min + i;
    ent::EofOptions row_opts = opts.eof;
    row_opts.threads = std::max(1, opts.threads / count);
    const auto sigma =
        fcs::rho_interval(model, ctx.fp, n)
            .regrouped({model.d, static_cast<Index>(std::llround(
                                     std::pow(model.d, n - 1)))});
    ReportRow row;
    row.index = n;
    row.eof_memory = eof_memory;
    row.eof_interval = ent::eof_optimize(sigma, row_opts).value;
    row.gap = eof_memory - row.eof_interval;
    row.envelope = epsilon_envelope(ctx.params, n);
    row.pass = row.gap >= -opts.tol_opt && row.gap <= row.envelope;
    report.rows[static_cast<std::size_t>(i)] = row;
  });
  return report;
}

ConvergenceReport verify_theorem2(const fcs::FcsModel& model, int p_min, int p_max,
                                  int n_offset, const RunOptions& opts) {
  if (p_min < 2 || p_max < p_min || n_offset < 0)
    throw std::invalid_argument("verify_theorem2: bad p range or offset");
  ModelContext ctx = make_context(model, opts);

  ConvergenceReport report;
  report.kind = ConvergenceReport::Kind::Theorem2;
  report.model_hash = models::model_hash(model);
  report.lambda = ctx.params.lambda;
  report.c = ctx.params.c;
  report.c1 = ctx.params.c1;
  report.n0 = ctx.params.n0;
  report.seed = opts.eof.seed;
  report.rows.resize(static_cast<std::size_t>(p_max - p_min + 1));

  const int count = p_max - p_min + 1;
  parallel_for(count, opts.threads, [&](int i) {
    const int p = p_min + i;
    const int n = p + n_offset;
    const int m = n - p + 1;
    const auto dims = std::vector<Index>{
        model.d, static_cast<Index>(std::llround(std::pow(model.d, m)))};
    const auto sigma =
        fcs::rho_spin_and_distant(model, ctx.fp, p, n).regrouped(dims);
    const auto reference =
        fcs::factorized_reference(model, ctx.fp, p, n).regrouped(dims);
    ReportRow row;
    row.index = p;
    row.trace_distance =
        linalg::trace_norm(sigma.matrix() - reference.matrix());
    row.nielsen_envelope = ent::eof_continuity_bound(sigma, reference);
    ent::EofOptions row_opts = opts.eof;
    row_opts.threads = std::max(1, opts.threads / count);
    row.eof_interval = ent::eof_optimize(sigma, row_opts).value;
    report.rows[static_cast<std::size_t>(i)] = row;
  });

  double c_prime = 0.0;
  for (const ReportRow& row : report.rows)
    c_prime = std::max(c_prime, row.trace_distance /
                                    std::pow(ctx.params.lambda, row.index - 2));
  for (ReportRow& row : report.rows) {
    row.distance_envelope = c_prime * std::pow(ctx.params.lambda, row.index - 2);
    row.pass = row.trace_distance <= row.distance_envelope * (1.0 + 1e-12) &&
               row.eof_interval <= row.nielsen_envelope;
  }
  return report;
}

DecayFit fit_decay_rate(const std::vector<std::pair<int, double>>& series) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, value] : series)
    if (value > 1e-12) pts.emplace_back(static_cast<double>(n), std::log(value));
  if (pts.size() < 3)
    throw std::invalid_argument(
        "fit_decay_rate: fewer than 3 usable points above the numerical floor");

  double sx = 0, sy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / static_cast<double>(pts.size());
  const double my = sy / static_cast<double>(pts.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  DecayFit fit;
  fit.points_used = static_cast<int>(pts.size());
  fit.slope = sxy / sxx;
  const double ss_res = syy - sxy * sxy / sxx;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<TauChainRow> tau_chain_rows(const fcs::FcsModel& model,
                                        const Matrix& u, int n,
                                        double norm_estimate) {
  if (n < 2) throw std::invalid_argument("tau_chain_rows: n must be >= 2");
  const Index b = model.b;
  if (u.cols() != b * b)
    throw std::invalid_argument("tau_chain_rows: isometry must have b^2 columns");
  if (linalg::max_abs(u.adjoint() * u - Matrix::Identity(b * b, b * b)) > 1e-10)
    throw std::invalid_argument("tau_chain_rows: columns are not orthonormal");

  const auto top = fcs::transfer_operator(model);
  const auto fp = fcs::fixed_point(top);
  TransferPowers powers(top, fp);
  const Matrix power = powers.deviation_power(n - 1) + powers.stationary_projector();

  linalg::EigenSystem es = linalg::hermitian_eig(fp.rho.matrix());
  std::vector<double> r(static_cast<std::size_t>(b));
  Matrix chi(b, b);  // unnormalized eigen-ensemble columns
  for (Index i = 0; i < b; ++i) {
    r[static_cast<std::size_t>(i)] = es.values(i);
    chi.col(i) = es.vectors.col(i) * std::sqrt(std::max(0.0, es.values(i)));
  }

  // x_i = V^dagger chi_i; Tr_B over d x b composites.
  const Index d = model.d;
  std::vector<Vector> x(static_cast<std::size_t>(b));
  for (Index i = 0; i < b; ++i)
    x[static_cast<std::size_t>(i)] = model.v.adjoint() * chi.col(i);

  auto trace_out_memory = [&](const Vector& lhs, const Vector& rhs_conj_src,
                              const Matrix& mem) {
    // Tr_B(x y^dagger (1 (x) mem)): z = (1 (x) mem^dagger) y, out(a,a') =
    // sum_beta x(a beta) conj(z(a' beta)).
    Matrix out = Matrix::Zero(d, d);
    Vector z(d * b);
    for (Index a = 0; a < d; ++a)
      z.segment(a * b, b) = mem.adjoint() * rhs_conj_src.segment(a * b, b);
    for (Index a = 0; a < d; ++a)
      for (Index a2 = 0; a2 < d; ++a2) {
        Complex acc(0, 0);
        for (Index beta = 0; beta < b; ++beta)
          acc += lhs(a * b + beta) * std::conj(z(a2 * b + beta));
        out(a, a2) = acc;
      }
    return out;
  };

  // T_inf[(i,i'),j] with weight r_j, and T_n[(i,i'),(j,j')].
  std::vector<Matrix> t_base(static_cast<std::size_t>(b * b));
  for (Index i = 0; i < b; ++i)
    for (Index i2 = 0; i2 < b; ++i2)
      t_base[static_cast<std::size_t>(i * b + i2)] = trace_out_memory(
          x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i2)],
          Matrix::Identity(b, b));

  // For the coefficient pair (i j), (i' j') the memory operator across the
  // tail is E_hat^(n-1)(|chi_j'><chi_j|) (the bra index rides on the left).
  std::vector<Matrix> t_finite(static_cast<std::size_t>(b * b * b * b));
  for (Index j = 0; j < b; ++j)
    for (Index j2 = 0; j2 < b; ++j2) {
      const double norm_j = std::sqrt(std::max(
          r[static_cast<std::size_t>(j)] * r[static_cast<std::size_t>(j2)],
          1e-300));
      const Matrix input = chi.col(j2) * chi.col(j).adjoint() / norm_j;
      const Matrix mem = fcs::unvec(power * fcs::vec(input), b);
      for (Index i = 0; i < b; ++i)
        for (Index i2 = 0; i2 < b; ++i2)
          t_finite[static_cast<std::size_t>(((i * b + i2) * b + j) * b + j2)] =
              trace_out_memory(x[static_cast<std::size_t>(i)],
                               x[static_cast<std::size_t>(i2)], mem);
    }

  std::vector<TauChainRow> out;
  const Index big_l = u.rows();
  for (Index l = 0; l < big_l; ++l) {
    Matrix psi = Matrix::Zero(d, d);
    Matrix phi = Matrix::Zero(d, d);
    double beta = 0.0;
    for (Index i = 0; i < b; ++i)
      for (Index j = 0; j < b; ++j) {
        const Complex uij = u(l, i * b + j);
        beta += std::norm(uij) * r[static_cast<std::size_t>(i)] *
                r[static_cast<std::size_t>(j)];
        for (Index i2 = 0; i2 < b; ++i2)
          for (Index j2 = 0; j2 < b; ++j2) {
            const Complex coeff = uij * std::conj(u(l, i2 * b + j2));
            phi += coeff *
                   t_finite[static_cast<std::size_t>(((i * b + i2) * b + j) * b + j2)];
            if (j == j2)
              psi += coeff * r[static_cast<std::size_t>(j)] *
                     t_base[static_cast<std::size_t>(i * b + i2)];
          }
      }

    TauChainRow row;
    row.member = static_cast<int>(l);
    row.beta = beta;
    if (beta < 1e-14) continue;  // unused ensemble slot (zero row of u)
    psi = 0.5 * (psi + psi.adjoint());
    phi = 0.5 * (phi + phi.adjoint());
    row.alpha = phi.trace().real();
    row.lhs = linalg::trace_norm(psi - phi);
    row.rhs = static_cast<double>(b * b) * beta * norm_estimate;
    row.tau = row.lhs / beta;
    const linalg::DensityMatrix psi_state(psi / beta, {d});
    const linalg::DensityMatrix phi_state(phi / row.alpha, {d});
    row.entropy_psi = linalg::von_neumann_entropy(psi_state);
    row.entropy_phi = linalg::von_neumann_entropy(phi_state);
    row.entropy_diff = std::abs(row.entropy_psi - row.entropy_phi);
    row.fannes = ent::fannes_bound(psi_state, phi_state);
    out.push_back(row);
  }
  return out;
}

}  // namespace fcsent::bounds
