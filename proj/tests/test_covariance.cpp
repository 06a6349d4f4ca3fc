#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vexp/covariance.hpp"

using namespace vexp;
using vexp::testing::max_abs_diff;

TEST_CASE("acf: white noise") {
  Matrix w0{{0.2, 0.1}, {0.1, -0.3}};
  const CepstralModel model(w0, {});
  const auto acf = acf_of_model(model, 5, 10);
  CHECK(max_abs_diff(acf.gammas[0], testing::taylor_exp(w0, 60)) < 1e-14);
  for (Index h = 1; h <= 5; ++h) CHECK(acf.gammas[static_cast<std::size_t>(h)].isZero(0.0));
  CHECK(acf.lag(9).isZero(0.0));
  CHECK_THROWS_AS(acf_of_model(model, 11, 10), std::invalid_argument);
}

TEST_CASE("acf: scalar VEXP(1) against the series for exp(w z)") {
  // Psi_k = w^k / k!, Sigma = 1, so Gamma_h = sum_j w^{2j+h} / (j! (j+h)!).
  const double w = 0.7;
  const CepstralModel model(Matrix::Zero(1, 1), {Matrix::Constant(1, 1, w)});
  const auto acf = acf_of_model(model, 4, 40);
  for (int h = 0; h <= 4; ++h) {
    double want = 0.0;
    for (int j = 0; j < 40; ++j) {
      want += std::pow(w, 2 * j + h) / (std::tgamma(j + 1.0) * std::tgamma(j + h + 1.0));
    }
    CHECK(acf.gammas[static_cast<std::size_t>(h)](0, 0) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("acf: negative lags are transposes") {
  std::mt19937_64 rng(1);
  const auto acf = acf_of_model(testing::random_model(rng, 3, 2, 0.5), 4, 30);
  for (Index h = 1; h <= 4; ++h) CHECK(acf.lag(-h) == acf.lag(h).transpose());
  CHECK(acf.lag(0) == acf.lag(0).transpose());
}

TEST_CASE("acf: matches spectral quadrature") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 3; ++rep) {
    const auto model = testing::random_model(rng, 2, 3, 0.6);
    const auto acf = acf_of_model(model, 6, 40);
    const auto oracle = testing::acf_by_quadrature(model, 6, 1024);
    for (Index h = 0; h <= 6; ++h) {
      CHECK(max_abs_diff(acf.gammas[static_cast<std::size_t>(h)],
                         oracle[static_cast<std::size_t>(h)]) < 1e-6);
    }
  }
}

TEST_CASE("inverse acf convolves with the acf to the identity") {
  // sum_h Gamma_h Gamma^{inv}_{k-h} = delta_k I when both are exact.
  std::mt19937_64 rng(44);
  const auto model = testing::random_model(rng, 2, 2, 0.4, 0.5);
  const Index L = 60;
  const auto g = acf_of_model(model, L, L);
  const auto gi = inverse_acf(model, L, L);
  for (Index k = 0; k <= 3; ++k) {
    Matrix s = Matrix::Zero(2, 2);
    for (Index h = -L; h <= L; ++h) s += g.lag(h) * gi.lag(k - h);
    const Matrix want = k == 0 ? Matrix(Matrix::Identity(2, 2)) : Matrix(Matrix::Zero(2, 2));
    CHECK(max_abs_diff(s, want) < 1e-10);
  }
}

TEST_CASE("inverse spectrum: quadrature of f f^{-1} is the identity") {
  std::mt19937_64 rng(45);
  const auto model = testing::random_model(rng, 2, 3, 0.6);
  CMatrix acc = CMatrix::Zero(2, 2);
  const int n = 256;
  for (int j = 0; j < n; ++j) {
    const double l = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    const CMatrix f = spectral_density(model, l).value;
    const CMatrix fi = inverse_spectral_density(model, l);
    CHECK((f * fi - CMatrix::Identity(2, 2)).norm() < 1e-10);
    acc += f * fi / static_cast<double>(n);
  }
  CHECK((acc - CMatrix::Identity(2, 2)).norm() < 1e-6);
}

TEST_CASE("negating every coefficient inverts the spectrum only when they commute") {
  // Scalar case: exact inverse.
  const CepstralModel scalar(Matrix::Constant(1, 1, 0.3),
                             {Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, -0.2)});
  const auto a = inverse_acf(scalar, 5, 30);
  const auto b = acf_of_model(scalar.negated(), 5, 30);
  for (Index h = 0; h <= 5; ++h) {
    CHECK(max_abs_diff(a.gammas[static_cast<std::size_t>(h)],
                       b.gammas[static_cast<std::size_t>(h)]) < 1e-15);
  }
  CHECK(inverse_acf(CepstralModel(Matrix::Constant(1, 1, 0.8), {}), 0, 5).gammas[0](0, 0) ==
        doctest::Approx(std::exp(-0.8)).epsilon(1e-14));

  // Non-normal Omega_1: exp{Omega(z)} does not commute with its adjoint and
  // the negated model's spectrum is not f^{-1}.
  const CepstralModel shear(Matrix::Zero(2, 2), {Matrix{{0.0, 1.0}, {0.0, 0.0}}});
  const double l = 0.7;
  const CMatrix f = spectral_density(shear, l).value;
  const CMatrix neg = spectral_density(shear.negated(), l).value;
  CHECK((f * neg - CMatrix::Identity(2, 2)).norm() > 0.5);
  CHECK((f * inverse_spectral_density(shear, l) - CMatrix::Identity(2, 2)).norm() < 1e-13);
}

TEST_CASE("spectral density: Hermitian, positive, matches oracle, f(-l) = conj f(l)") {
  std::mt19937_64 rng(9);
  const auto model = testing::random_model(rng, 3, 3);
  for (double lambda : {0.0, 0.4, 1.3, 2.9, std::numbers::pi}) {
    const CMatrix f = spectral_density(model, lambda).value;
    CHECK((f - f.adjoint()).norm() == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<CMatrix>(f).eigenvalues().minCoeff() > 0.0);
    const CMatrix want = testing::spectrum_oracle(model, lambda);
    CHECK((f - want).norm() / want.norm() < 1e-10);
    const CMatrix fm = spectral_density(model, -lambda).value;
    CHECK((fm - f.conjugate()).norm() < 1e-10 * f.norm());
  }
}

TEST_CASE("spectral density: log det equals tr Omega_0 + 2 Re tr Omega(e^{-il})") {
  std::mt19937_64 rng(10);
  const auto model = testing::random_model(rng, 2, 4, 0.5);
  for (double lambda : {0.1, 1.0, 2.5}) {
    double want = model.omega0().trace();
    for (Index k = 1; k <= 4; ++k) want += 2.0 * model.omega(k).trace() * std::cos(lambda * k);
    const double got = std::log(spectral_density(model, lambda).value.determinant().real());
    CHECK(got == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("squared coherence") {
  // Diagonal model: no cross-spectrum at all.
  Matrix d1 = Matrix::Zero(2, 2);
  d1(0, 0) = 0.8;
  d1(1, 1) = -0.5;
  const CepstralModel diag(Matrix::Identity(2, 2) * 0.1, {d1});
  for (double l : frequency_grid(32)) CHECK(squared_coherence(diag, l) < 1e-20);

  std::mt19937_64 rng(3);
  const auto model = testing::random_model(rng, 2, 2);
  for (double l : frequency_grid(16)) {
    const double c = squared_coherence(model, l);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    const CMatrix f = testing::spectrum_oracle(model, l);
    const double want = std::norm(f(0, 1)) / (f(0, 0).real() * f(1, 1).real());
    CHECK(c == doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(squared_coherence(CepstralModel::zero(3, 1), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(squared_coherence(model, 1.0, 0, 0), std::invalid_argument);
}

TEST_CASE("periodogram: rank one, Hermitian, matches direct DFT") {
  Matrix x{{1.0, 0.5}, {-0.3, 2.0}, {0.7, -1.1}};
  const double l = 0.9;
  const CMatrix p = periodogram(x, l);
  CHECK((p - p.adjoint()).norm() < 1e-15);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p);
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-14);
  Complex d0 = 0.0;
  for (int t = 0; t < 3; ++t) d0 += x(t, 0) * std::exp(Complex(0.0, -l * (t + 1)));
  CHECK(p(0, 0).real() == doctest::Approx(std::norm(d0) / 3.0).epsilon(1e-14));
  CHECK(periodogram(x, 0.0)(0, 1).real() == doctest::Approx(1.4 * 1.4 / 3.0));
}

TEST_CASE("frequency grid") {
  const auto g = frequency_grid(4);
  REQUIRE(g.size() == 4);
  CHECK(g.front() == doctest::Approx(std::numbers::pi / 4));
  CHECK(g.back() == std::numbers::pi);
  CHECK_THROWS(frequency_grid(0));
}

TEST_CASE("serial and parallel spectral grids are bit-identical") {
  std::mt19937_64 rng(12);
  const auto model = testing::random_model(rng, 2, 3);
  const auto lambdas = frequency_grid(64);
  const auto s = coherence_grid(model, lambdas, 0, 1, Exec::serial);
  const auto p = coherence_grid(model, lambdas, 0, 1, Exec::parallel);
  CHECK(s == p);
  const auto fs = spectral_grid(model, lambdas, Exec::serial);
  const auto fp = spectral_grid(model, lambdas, Exec::parallel);
  for (std::size_t k = 0; k < fs.size(); ++k) CHECK(fs[k].value == fp[k].value);
}
