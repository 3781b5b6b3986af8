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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "linalg.hpp"
#include "rng.hpp"

using namespace fcsent;
using linalg::Complex;
using linalg::Matrix;
using linalg::Vector;

TEST_CASE("kron identity and diagonal cases") {
  const Matrix i2 = Matrix::Identity(2, 2);
  CHECK(linalg::max_abs(linalg::kron(i2, i2) - Matrix::Identity(4, 4)) == 0.0);

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 1.0, 2.0;
  b.diagonal() << 3.0, 4.0;
  Matrix expected = Matrix::Zero(4, 4);
  expected.diagonal() << 3.0, 4.0, 6.0, 8.0;
  CHECK(linalg::max_abs(linalg::kron(a, b) - expected) == 0.0);
}

TEST_CASE("kron respects the product structure (A x B)(x kron y)") {
  rng::Rng gen(7);
  const Matrix a = gen.gaussian_matrix(2, 2), b = gen.gaussian_matrix(2, 2);
  const Vector x = gen.unit_vector(2), y = gen.unit_vector(2);
  const Vector lhs = linalg::kron(a, b) * linalg::kron(Matrix(x), Matrix(y));
  const Vector rhs = linalg::kron(Matrix(a * x), Matrix(b * y));
  CHECK(linalg::max_abs(Matrix(lhs - rhs)) < 1e-14);
}

TEST_CASE("kron is associative") {
  Matrix a(2, 2), b(2, 2), c(2, 2);
  a << 1, 2, 3, 4;
  b << Complex(0, 1), 2, -1, Complex(3, -2);
  c << 5, 0, 1, -3;
  CHECK(linalg::max_abs(linalg::kron(linalg::kron(a, b), c) -
                        linalg::kron(a, linalg::kron(b, c))) == 0.0);

  rng::Rng gen(8);
  const Matrix x = gen.gaussian_matrix(2, 3), y = gen.gaussian_matrix(3, 2),
               z = gen.gaussian_matrix(2, 2);
  CHECK(linalg::max_abs(linalg::kron(linalg::kron(x, y), z) -
                        linalg::kron(x, linalg::kron(y, z))) < 1e-14);
}

namespace {

linalg::DensityMatrix random_state(rng::Rng& gen, linalg::Index n,
                                   std::vector<linalg::Index> dims) {
  return {gen.ginibre_state(n), std::move(dims)};
}

}  // namespace

TEST_CASE("partial trace of a product state factorizes") {
  rng::Rng gen(11);
  const Matrix a = gen.ginibre_state(2), b = gen.ginibre_state(3);
  const linalg::DensityMatrix ab(linalg::kron(a, b), {2, 3});
  const auto ta = linalg::partial_trace(ab, {0});
  CHECK(linalg::max_abs(ta.matrix() - a) < 1e-12);
  const auto tb = linalg::partial_trace(ab, {1});
  CHECK(linalg::max_abs(tb.matrix() - b) < 1e-12);
}

TEST_CASE("tracing all factors leaves [1]") {
  rng::Rng gen(12);
  const auto rho = random_state(gen, 6, {2, 3});
  const auto full = linalg::partial_trace(rho, {});
  CHECK(full.dim() == 1);
  CHECK(std::abs(full.matrix()(0, 0) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("Bell state marginal is maximally mixed") {
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto rho = linalg::DensityMatrix::pure(bell, {2, 2});
  const auto marginal = linalg::partial_trace(rho, {0});
  CHECK(linalg::max_abs(marginal.matrix() - 0.5 * Matrix::Identity(2, 2)) < 1e-14);
}

TEST_CASE("partial trace composes") {
  rng::Rng gen(13);
  const auto rho = random_state(gen, 12, {2, 3, 2});
  const auto two_step =
      linalg::partial_trace(linalg::partial_trace(rho, {0, 2}), {0});
  const auto one_step = linalg::partial_trace(rho, {0});
  CHECK(linalg::max_abs(two_step.matrix() - one_step.matrix()) < 1e-12);
}

TEST_CASE("partial trace rejects out-of-range factors") {
  rng::Rng gen(14);
  const auto rho = random_state(gen, 4, {2, 2});
  CHECK_THROWS_AS(linalg::partial_trace(rho, {2}), std::out_of_range);
}

TEST_CASE("hermitian_eig on known matrices") {
  const auto id3 = linalg::hermitian_eig(Matrix::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(id3.values(i) == doctest::Approx(1.0));

  Matrix sx(2, 2);
  sx << 0, 1, 1, 0;
  const auto s = linalg::hermitian_eig(sx);
  CHECK(s.values(0) == doctest::Approx(-1.0));
  CHECK(s.values(1) == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian input") {
  rng::Rng gen(15);
  Matrix g = gen.gaussian_matrix(6, 6);
  const Matrix h = 0.5 * (g + g.adjoint());
  const auto es = linalg::hermitian_eig(h);
  const Matrix rebuilt =
      es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Complex>() *
      es.vectors.adjoint();
  CHECK(linalg::max_abs(rebuilt - h) < 1e-9);
  CHECK(linalg::max_abs(es.vectors.adjoint() * es.vectors -
                        Matrix::Identity(6, 6)) < 1e-9);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(linalg::hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("general_spectrum sorts by descending modulus") {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = Complex(0, 2);
  m(2, 2) = -1.0;
  const auto s = linalg::general_spectrum(m);
  CHECK(s.modulus(0) == doctest::Approx(3.0));
  CHECK(s.modulus(1) == doctest::Approx(2.0));
  CHECK(s.modulus(2) == doctest::Approx(1.0));
}

TEST_CASE("general_spectrum of a rotation") {
  const double theta = std::numbers::pi / 3.0;
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const auto s = linalg::general_spectrum(r);
  CHECK(std::abs(std::abs(s.eigenvalues[0]) - 1.0) < 1e-12);
  CHECK(std::abs(s.eigenvalues[0].real() - std::cos(theta)) < 1e-12);
  CHECK(std::abs(std::abs(s.eigenvalues[0].imag()) - std::sin(theta)) < 1e-12);
}

TEST_CASE("general_spectrum eigenvalue sum equals trace") {
  rng::Rng gen(16);
  const Matrix m = gen.gaussian_matrix(5, 5);
  const auto s = linalg::general_spectrum(m);
  Complex sum(0, 0);
  for (const auto& ev : s.eigenvalues) sum += ev;
  CHECK(std::abs(sum - m.trace()) < 1e-8);
}

TEST_CASE("trace_norm basics") {
  Matrix m = Matrix::Zero(2, 2);
  m.diagonal() << 1.0, -2.0;
  CHECK(linalg::trace_norm(m) == doctest::Approx(3.0));

  rng::Rng gen(17);
  const Matrix u = gen.haar_unitary(4);
  CHECK(linalg::trace_norm(u) == doctest::Approx(4.0));
}

TEST_CASE("trace_norm agrees with the eigenvalue route") {
  rng::Rng gen(18);
  const Matrix m = gen.gaussian_matrix(4, 4);
  const auto es = linalg::hermitian_eig(Matrix(m.adjoint() * m));
  double expected = 0.0;
  for (int i = 0; i < 4; ++i) expected += std::sqrt(std::max(0.0, es.values(i)));
  CHECK(linalg::trace_norm(m) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(linalg::trace_norm(m) >= std::abs(m.trace()) - 1e-12);
}

TEST_CASE("trace_norm unitary invariance and triangle inequality") {
  rng::Rng gen(19);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix a = gen.gaussian_matrix(3, 3), b = gen.gaussian_matrix(3, 3);
    const Matrix u = gen.haar_unitary(3), w = gen.haar_unitary(3);
    CHECK(linalg::trace_norm(u * a * w) ==
          doctest::Approx(linalg::trace_norm(a)).epsilon(1e-10));
    CHECK(linalg::trace_norm(a + b) <=
          linalg::trace_norm(a) + linalg::trace_norm(b) + 1e-12);
  }
}

TEST_CASE("entropy of pure, maximally mixed, and diagonal states") {
  Vector psi = Vector::Zero(3);
  psi(1) = 1.0;
  CHECK(linalg::von_neumann_entropy(linalg::DensityMatrix::pure(psi, {3})) ==
        doctest::Approx(0.0));

  const linalg::DensityMatrix mixed(Matrix::Identity(4, 4) / 4.0, {4});
  CHECK(linalg::von_neumann_entropy(mixed) == doctest::Approx(std::log(4.0)));

  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.0 / 3.0, 2.0 / 3.0;
  const double expected = std::log(3.0) - (2.0 / 3.0) * std::log(2.0);
  CHECK(linalg::von_neumann_entropy(linalg::DensityMatrix(d, {2})) ==
        doctest::Approx(expected));
}

TEST_CASE("entropy is unitarily invariant") {
  rng::Rng gen(20);
  const auto rho = random_state(gen, 4, {4});
  const double s0 = linalg::von_neumann_entropy(rho);
  for (int rep = 0; rep < 3; ++rep) {
    const Matrix u = gen.haar_unitary(4);
    const linalg::DensityMatrix rotated(u * rho.matrix() * u.adjoint(), {4});
    CHECK(std::abs(linalg::von_neumann_entropy(rotated) - s0) < 1e-10);
  }
}

TEST_CASE("entropy rejects non-positive states") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.5, -0.5;
  CHECK_THROWS_AS(linalg::von_neumann_entropy(linalg::DensityMatrix(d, {2})),
                  std::invalid_argument);
}

TEST_CASE("DensityMatrix validates its invariants") {
  CHECK_THROWS_AS(linalg::DensityMatrix(Matrix::Identity(2, 2), {2}),
                  std::invalid_argument);  // trace 2
  Matrix nh(2, 2);
  nh << 0.5, 0.1, 0.0, 0.5;
  CHECK_THROWS_AS(linalg::DensityMatrix(nh, {2}), std::invalid_argument);
  CHECK_THROWS_AS(linalg::DensityMatrix(Matrix::Identity(4, 4) / 4.0, {2, 3}),
                  std::invalid_argument);  // dims product mismatch
}
