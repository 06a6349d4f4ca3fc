#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vexp/cepstral.hpp"
#include "vexp/covariance.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/polynomial.hpp"

using namespace vexp;
using vexp::testing::max_abs_diff;

TEST_CASE("matrix_exp: closed-form cases") {
  CHECK(max_abs_diff(matrix_exp(Matrix(Matrix::Zero(3, 3))), Matrix::Identity(3, 3)) == 0.0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  const Matrix ed = matrix_exp(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(ed(0, 1) == 0.0);

  Matrix n{{0.0, 1.0}, {0.0, 0.0}};
  CHECK(max_abs_diff(matrix_exp(n), Matrix{{1.0, 1.0}, {0.0, 1.0}}) < 1e-15);
}

TEST_CASE("matrix_exp: matches Taylor oracle on random 3x3") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix a = testing::random_matrix(rng, 3);
    const Matrix want = testing::taylor_exp(a, 60);
    const Matrix got = matrix_exp(a);
    CHECK((got - want).norm() / want.norm() < 1e-12);
  }
}

TEST_CASE("matrix_exp: large norm and complex argument") {
  std::mt19937_64 rng(5);
  const Matrix a = testing::random_matrix(rng, 3, 4.0);
  // exp(A) exp(-A) = I holds whatever the norm.
  CHECK(max_abs_diff(matrix_exp(a) * matrix_exp(Matrix(-a)), Matrix::Identity(3, 3)) < 1e-9);

  CMatrix c(2, 2);
  c << Complex(0.3, 0.2), Complex(-0.1, 0.5), Complex(0.7, -0.4), Complex(-0.2, 0.1);
  const CMatrix want = testing::taylor_exp(c, 60);
  CHECK((matrix_exp(c) - want).norm() < 1e-13);
}

TEST_CASE("matrix_exp: rejects bad input") {
  CHECK_THROWS_AS(matrix_exp(Matrix(Matrix::Zero(2, 3))), std::invalid_argument);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = std::nan("");
  CHECK_THROWS_AS(matrix_exp(bad), std::invalid_argument);
}

TEST_CASE("poly_mul_trunc: identity and single terms") {
  std::mt19937_64 rng(3);
  const Index m = 2;
  std::vector<Matrix> rc;
  for (int k = 0; k < 5; ++k) rc.push_back(testing::random_matrix(rng, m));
  const MatrixPolynomial r(m, rc);
  const auto out = poly_mul_trunc(MatrixPolynomial::identity(m), r, 3);
  REQUIRE(out.truncation() == 3);
  for (Index k = 0; k <= 3; ++k) CHECK(out[k] == r[k]);

  const Matrix a = testing::random_matrix(rng, m), b = testing::random_matrix(rng, m);
  const MatrixPolynomial pa(m, {Matrix::Zero(m, m), a});
  const MatrixPolynomial pb(m, {Matrix::Zero(m, m), b});
  const auto ab = poly_mul_trunc(pa, pb, 4);
  CHECK(max_abs_diff(ab[2], a * b) == 0.0);
  CHECK(ab[0].isZero(0.0));
  CHECK(ab[1].isZero(0.0));
  CHECK(ab[3].isZero(0.0));
  // Order of the product matters.
  const auto ba = poly_mul_trunc(pb, pa, 4);
  CHECK(max_abs_diff(ab[2], ba[2]) > 1e-3);
}

TEST_CASE("poly_mul_trunc: matches expansion recovered from point evaluations") {
  std::mt19937_64 rng(8);
  const Index m = 2;
  std::vector<Matrix> pc, rc;
  for (int k = 0; k <= 3; ++k) pc.push_back(testing::random_matrix(rng, m));
  for (int k = 0; k <= 4; ++k) rc.push_back(testing::random_matrix(rng, m));
  const MatrixPolynomial p(m, pc), r(m, rc);
  // The full product has degree 7; evaluate p(z) r(z) at 16 roots of unity
  // and invert the DFT to read off its coefficients.
  const int n = 16;
  std::vector<CMatrix> coef(8, CMatrix::Zero(m, m));
  for (int j = 0; j < n; ++j) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
    const CMatrix v = p.evaluate(z) * r.evaluate(z);
    for (int k = 0; k < 8; ++k) coef[k] += v * std::pow(z, -k) / static_cast<double>(n);
  }
  const auto out = poly_mul_trunc(p, r, 7);
  for (int k = 0; k < 8; ++k) CHECK(max_abs_diff(out[k], coef[k].real()) < 1e-13);
  CHECK_THROWS_AS(poly_mul_trunc(p, MatrixPolynomial::identity(3), 2), std::invalid_argument);
}

TEST_CASE("CepstralModel: construction and parameter layout") {
  Matrix asym{{1.0, 0.5}, {0.2, 1.0}};
  CHECK_THROWS_AS(CepstralModel(asym, {}), std::invalid_argument);
  CHECK_THROWS_AS(CepstralModel(Matrix::Identity(2, 2), {Matrix::Zero(3, 3)}),
                  std::invalid_argument);

  // Column-major vec ordering: V_1 = (0.320, -1.170, 0.000, 0.250).
  Vector params(param_count(2, 1));
  params << 1.305, 0.030, -2.455, 0.320, -1.170, 0.000, 0.250;
  const auto model = to_model(params, 2, 1);
  CHECK(model.omega0()(0, 0) == 1.305);
  CHECK(model.omega0()(1, 0) == 0.030);
  CHECK(model.omega0()(0, 1) == 0.030);
  CHECK(model.omega0()(1, 1) == -2.455);
  CHECK(model.omega(1)(1, 0) == -1.170);
  CHECK(model.omega(1)(0, 1) == 0.000);
  CHECK(to_vector(model) == params);
  CHECK_THROWS_AS(to_model(params, 2, 2), std::invalid_argument);
}

TEST_CASE("ParamVector round trip is bit-exact") {
  std::mt19937_64 rng(21);
  for (Index m = 1; m <= 4; ++m) {
    for (Index q = 0; q <= 4; ++q) {
      const auto model = testing::random_model(rng, m, q);
      CHECK(to_model(to_vector(model), m, q) == model);
      const Vector v = to_vector(model);
      CHECK(to_vector(to_model(v, m, q)) == v);
    }
  }
}

TEST_CASE("wold_from_cepstral: trivial and VEXP(1) cases") {
  const auto zero = wold_from_cepstral(CepstralModel::zero(2, 3), 10);
  CHECK(zero[0] == Matrix::Identity(2, 2));
  for (Index k = 1; k <= 10; ++k) CHECK(zero[k].isZero(0.0));

  std::mt19937_64 rng(4);
  const Matrix w1 = testing::random_matrix(rng, 3);
  const CepstralModel m1(Matrix::Zero(3, 3), {w1});
  const auto psi = wold_from_cepstral(m1, 8);
  Matrix power = Matrix::Identity(3, 3);
  double fact = 1.0;
  for (Index k = 1; k <= 8; ++k) {
    power = power * w1;
    fact *= static_cast<double>(k);
    CHECK(max_abs_diff(psi[k], power / fact) < 1e-14);
  }
  CHECK_THROWS_AS(wold_from_cepstral(m1, 0), std::invalid_argument);
}

TEST_CASE("wold_from_cepstral: non-commuting nilpotent example") {
  const Matrix w1{{0.0, 1.0}, {0.0, 0.0}};
  const Matrix w2{{0.0, 0.0}, {1.0, 0.0}};
  const CepstralModel model(Matrix::Zero(2, 2), {w1, w2, Matrix::Zero(2, 2)});
  const auto psi = wold_from_cepstral(model, 6);
  // Psi_3 = Omega_3 + (Omega_1 Omega_2 + Omega_2 Omega_1)/2 + Omega_1^3/6 = I/2.
  CHECK(max_abs_diff(psi[3], 0.5 * Matrix::Identity(2, 2)) < 1e-15);
  // The Abelian shortcut Omega_1 Omega_2 alone would give diag(1, 0).
  CHECK(max_abs_diff(psi[3], w1 * w2) > 0.4);
}

TEST_CASE("wold_from_cepstral: closed forms for the first three coefficients") {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 30; ++rep) {
    const Index m = 1 + rep % 3;
    const auto model = testing::random_model(rng, m, 3);
    const auto psi = wold_from_cepstral(model, 5);
    const Matrix& o1 = model.omega(1);
    const Matrix& o2 = model.omega(2);
    const Matrix& o3 = model.omega(3);
    CHECK(max_abs_diff(psi[1], o1) < 1e-12);
    CHECK(max_abs_diff(psi[2], o2 + o1 * o1 / 2.0) < 1e-12);
    CHECK(max_abs_diff(psi[3], o3 + (o1 * o2 + o2 * o1) / 2.0 + o1 * o1 * o1 / 6.0) < 1e-12);
  }
}

TEST_CASE("wold_from_cepstral: matches frequency-domain oracle") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 3; ++rep) {
    const auto model = testing::random_model(rng, 2, 3);
    const auto psi = wold_from_cepstral(model, 40);
    const auto oracle = testing::wold_by_quadrature(model, 12);
    for (Index k = 0; k <= 12; ++k) CHECK(max_abs_diff(psi[k], oracle[k]) < 1e-10);
  }
}

TEST_CASE("cepstral_from_wold: inverse of wold_from_cepstral") {
  CHECK(cepstral_from_wold(MatrixPolynomial::identity(2, 5), 3)[2].isZero(0.0));

  std::mt19937_64 rng(123);
  for (int rep = 0; rep < 40; ++rep) {
    const Index m = 1 + rep % 4;
    const Index q = 1 + rep % 6;
    const auto model = testing::random_model(rng, m, q);
    const auto psi = wold_from_cepstral(model, q + 25);
    CHECK(max_abs_diff(cepstral_from_wold(psi, 1)[0], psi[1]) < 1e-15);
    const auto back = cepstral_from_wold(psi, q);
    REQUIRE(static_cast<Index>(back.size()) == q);
    for (Index k = 1; k <= q; ++k) CHECK(max_abs_diff(back[k - 1], model.omega(k)) < 1e-8);
  }

  auto bad = MatrixPolynomial::identity(2, 3).coeffs();
  bad[0](0, 0) = 2.0;
  CHECK_THROWS_AS(cepstral_from_wold(MatrixPolynomial(2, bad), 2), std::invalid_argument);
}

TEST_CASE("innovation_covariance") {
  CHECK(max_abs_diff(innovation_covariance(CepstralModel::zero(3, 1)), Matrix::Identity(3, 3)) ==
        0.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = std::log(4.0);
  d(1, 1) = std::log(9.0);
  const Matrix s = innovation_covariance(CepstralModel(d, {}));
  CHECK(s(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s(1, 1) == doctest::Approx(9.0).epsilon(1e-14));

  const Matrix w0{{1.305, 0.030}, {0.030, -2.455}};
  const Matrix sigma = innovation_covariance(CepstralModel(w0, {}));
  CHECK(sigma == sigma.transpose());
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(sigma).eigenvalues().minCoeff() > 0.0);
  CHECK(sigma.determinant() == doctest::Approx(std::exp(1.305 - 2.455)).epsilon(1e-12));
}

TEST_CASE("det Psi(z) = exp tr Omega(z) on the unit circle") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    const Index m = 1 + rep % 3;
    const auto model = testing::random_model(rng, m, 1 + rep % 4, 0.5);
    const auto psi = wold_from_cepstral(model, 40);
    for (int j = 0; j < 64; ++j) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * j / 64.0);
      Complex tr = 0.0;
      for (Index k = 1; k <= model.order(); ++k) tr += model.omega(k).trace() * std::pow(z, k);
      CHECK(std::abs(psi.evaluate(z).determinant() - std::exp(tr)) < 1e-6);
    }
  }
}

TEST_CASE("truncated cepstral models converge in lag-zero covariance") {
  std::mt19937_64 rng(2024);
  std::vector<Matrix> w;
  for (int k = 1; k <= 10; ++k) {
    Matrix r = testing::random_matrix(rng, 2);
    w.push_back(std::pow(0.5, k) * r / r.norm());
  }
  const CepstralModel full(Matrix::Zero(2, 2), w);
  const Matrix g10 = acf_of_model(full, 0, 60).gammas[0];
  double prev = 1e300;
  for (Index q = 1; q <= 10; ++q) {
    const double diff = (acf_of_model(full.truncated(q), 0, 60).gammas[0] - g10).norm();
    if (q >= 6) CHECK(diff <= prev);
    prev = diff;
    if (q == 8) CHECK(diff < 1e-4);
  }
}
