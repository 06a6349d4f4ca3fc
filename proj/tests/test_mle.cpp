#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "support.hpp"
#include "vexp/forecast.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/mle.hpp"

using namespace vexp;
using vexp::testing::max_abs_diff;

TEST_CASE("objective kind names") {
  CHECK(parse_objective_kind("gaussian") == ObjectiveKind::gaussian);
  CHECK(parse_objective_kind("approx-whittle") == ObjectiveKind::approx_whittle);
  CHECK(to_string(ObjectiveKind::whittle) == "whittle");
  CHECK_THROWS_AS(parse_objective_kind("exact"), std::invalid_argument);
}

TEST_CASE("glr_test") {
  const auto same = glr_test(1.25, 1.25, 3, 50);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  // chi-square(4) upper tail has the closed form e^{-x/2} (1 + x/2).
  const auto r = glr_test(1.05, 1.00, 4, 100);
  CHECK(r.statistic == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(std::exp(-2.5) * 3.5).epsilon(1e-12));

  // chi-square(2) tail is e^{-x/2}.
  CHECK(glr_test(0.3, 0.2, 2, 40).p_value == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));

  const auto shifted = glr_test(1.05 + 7.0, 1.00 + 7.0, 4, 100);
  CHECK(shifted.statistic == doctest::Approx(r.statistic).epsilon(1e-9));
  CHECK(glr_test(0.9, 1.0, 2, 10).statistic == 0.0);
  CHECK_THROWS_AS(glr_test(1.0, 0.5, 0, 10), std::invalid_argument);
}

TEST_CASE("numerical_hessian: exact on quadratics, symmetric, serial == parallel") {
  Matrix a{{2.0, 0.5, -0.3}, {0.5, 1.0, 0.2}, {-0.3, 0.2, 3.0}};
  const Objective f = [&](const Vector& x) { return x.dot(a * x); };
  const Vector at{{0.3, -1.2, 2.0}};
  const Matrix h = numerical_hessian(f, at, 1e-4);
  CHECK(max_abs_diff(h, 2.0 * a) < 1e-6);
  CHECK(h == h.transpose());
  CHECK(numerical_hessian(f, at, 1e-4, Exec::parallel) == h);
}

TEST_CASE("numerical_hessian: step halving is stable on a smooth objective") {
  const Objective f = [](const Vector& x) {
    return std::exp(0.3 * x[0] * x[1]) + std::sin(x[0]) * x[2] + x[2] * x[2] * x[1];
  };
  const Vector at{{0.4, -0.7, 1.1}};
  const Matrix h1 = numerical_hessian(f, at, 1e-3);
  const Matrix h2 = numerical_hessian(f, at, 5e-4);
  CHECK((h1 - h2).norm() / h2.norm() < 1e-3);
}

TEST_CASE("numerical_hessian: non-finite values name the coordinate") {
  const Objective f = [](const Vector& x) { return x[1] > 0.5 ? std::nan("") : x.squaredNorm(); };
  try {
    numerical_hessian(f, Vector{{0.0, 0.5}}, 1e-3);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("coordinate") != std::string::npos);
  }
}

TEST_CASE("fd_gradient on a known function") {
  const Objective f = [](const Vector& x) { return x[0] * x[0] * x[1] + std::exp(x[1]); };
  const Vector x{{1.5, -0.5}};
  const Vector g = fd_gradient(f, x, 1e-6);
  CHECK(g[0] == doctest::Approx(2.0 * 1.5 * -0.5).epsilon(1e-8));
  CHECK(g[1] == doctest::Approx(1.5 * 1.5 + std::exp(-0.5)).epsilon(1e-8));
  CHECK(fd_gradient(f, x, 1e-6, Exec::parallel) == g);
}

TEST_CASE("covariance_from_hessian") {
  const auto est = covariance_from_hessian(Matrix{{2.0, 0.0}, {0.0, 4.0}}, 1);
  CHECK(est.std_errors[0] == doctest::Approx(1.0));
  CHECK(est.std_errors[1] == doctest::Approx(std::sqrt(0.5)));
  const auto bad = covariance_from_hessian(Matrix{{2.0, 0.0}, {0.0, -4.0}}, 10);
  CHECK(std::isfinite(bad.std_errors[0]));
  CHECK(std::isnan(bad.std_errors[1]));
  CHECK(std::isnan(covariance_from_hessian(Matrix::Zero(2, 2), 10).std_errors[0]));
}

TEST_CASE("fit_mle: white noise data gives a near-white fit") {
  const Matrix w0{{0.4, 0.1}, {0.1, -0.2}};
  const CepstralModel truth(w0, {Matrix::Zero(2, 2)});
  const DataPanel data = simulate(truth, Vector::Zero(2), 400, 42);
  const FitResult fit = fit_mle(data, 1, ObjectiveKind::gaussian);
  CHECK(fit.converged);
  CHECK(fit.gradient_norm < 1e-6);
  for (Index i = 3; i < 7; ++i) {
    REQUIRE(std::isfinite(fit.std_errors[i]));
    CHECK(std::abs(fit.estimate[i]) < 3.0 * fit.std_errors[i]);
  }
  const Matrix centered = data.demeaned().values();
  const Matrix logcov = symmetric_log(centered.transpose() * centered / 400.0);
  CHECK(max_abs_diff(fit.model.omega0(), logcov) < 0.1);
  CHECK(max_abs_diff(fit.model.omega0(), w0) < 0.2);
}

TEST_CASE("fit_mle: estimate beats the truth on the same data, for every objective") {
  const auto truth = testing::sparse_design();
  const DataPanel data = simulate(truth, Vector::Zero(2), 192, 7);
  const DataPanel centered = data.demeaned();
  for (auto kind : {ObjectiveKind::gaussian, ObjectiveKind::whittle, ObjectiveKind::approx_whittle}) {
    MleConfig cfg;
    cfg.std_errors = false;
    const FitResult fit = fit_mle(data, 4, kind, cfg);
    CHECK(fit.converged);
    const Objective f = make_objective(centered, 4, kind);
    CHECK(fit.objective_value <= f(to_vector(truth)));
    CHECK(fit.objective_value == doctest::Approx(f(fit.estimate)).epsilon(1e-12));
  }
}

TEST_CASE("fit_mle: sparse design recovered within 3 SE in most coordinates") {
  const auto truth = testing::sparse_design();
  const DataPanel data = simulate(truth, Vector::Zero(2), 192, 2024);
  const FitResult fit = fit_mle(data, 4, ObjectiveKind::gaussian);
  CHECK(fit.converged);
  const Vector v = to_vector(truth);
  int covered = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(fit.estimate[i] - v[i]) <= 3.0 * fit.std_errors[i]) ++covered;
  }
  for (Index j = 0; j < 2; ++j) {
    if (std::abs(fit.mean[j]) <= 3.0 * fit.mean_std_errors[j]) ++covered;
  }
  MESSAGE("covered " << covered << " of 21");
  CHECK(covered >= 17);
}

TEST_CASE("fit_mle: zero mask holds coordinates and sparsify drops small ones") {
  const auto truth = testing::sparse_design();
  const DataPanel data = simulate(truth, Vector::Zero(2), 192, 99);
  MleConfig cfg;
  cfg.zero_mask.assign(static_cast<std::size_t>(param_count(2, 2)), false);
  cfg.zero_mask[5] = true;  // Omega_1(0,1)
  const FitResult fit = fit_mle(data, 2, ObjectiveKind::gaussian, cfg);
  CHECK(fit.estimate[5] == 0.0);
  CHECK(std::isnan(fit.std_errors[5]));

  const FitResult full = fit_mle(data, 2, ObjectiveKind::gaussian);
  const FitResult sparse = sparsify_refit(data, full);
  for (Index i = 0; i < full.estimate.size(); ++i) {
    const bool small = std::abs(full.estimate[i]) < 1.96 * full.std_errors[i];
    const bool diag = i == 0 || i == 2;
    CHECK(sparse.zero_mask[static_cast<std::size_t>(i)] == (small && !diag));
    if (sparse.zero_mask[static_cast<std::size_t>(i)]) CHECK(sparse.estimate[i] == 0.0);
  }
  CHECK(sparse.objective_value >= full.objective_value - 1e-9);
}

TEST_CASE("fit_mle: max iterations yields a flagged result, not an exception") {
  const DataPanel data = simulate(testing::sparse_design(), Vector::Zero(2), 100, 3);
  MleConfig cfg;
  cfg.max_iter = 2;
  cfg.std_errors = false;
  const FitResult fit = fit_mle(data, 2, ObjectiveKind::gaussian, cfg);
  CHECK_FALSE(fit.converged);
  CHECK(fit.iterations == 2);
  CHECK(std::isfinite(fit.objective_value));
}

TEST_CASE("fit_mle is deterministic and serial/parallel agree") {
  const DataPanel data = simulate(testing::sparse_design(), Vector::Zero(2), 120, 5);
  MleConfig a;
  a.exec = Exec::serial;
  MleConfig b;
  b.exec = Exec::parallel;
  const FitResult fa = fit_mle(data, 1, ObjectiveKind::gaussian, a);
  const FitResult fb = fit_mle(data, 1, ObjectiveKind::gaussian, b);
  CHECK(fa.estimate == fb.estimate);
  CHECK(fa.std_errors.isApprox(fb.std_errors, 0.0));
}

TEST_CASE("GLR: nested-true rejection rate is near the nominal level") {
  // Truth is VEXP(1); test q = 1 against q = 2 (df = 4). The chi-square
  // approximation is conservative at T = 150; T = 400 is close to nominal.
  const CepstralModel truth(Matrix{{0.2, 0.05}, {0.05, -0.1}}, {Matrix{{0.5, 0.2}, {-0.3, 0.4}}});
  MleConfig cfg;
  cfg.std_errors = false;
  int rejections = 0;
  const int reps = 50;
  for (int r = 0; r < reps; ++r) {
    const DataPanel data = simulate(truth, Vector::Zero(2), 400, 1000 + r);
    const FitResult small = fit_mle(data, 1, ObjectiveKind::gaussian, cfg);
    MleConfig warm = cfg;
    Vector start = Vector::Zero(param_count(2, 2));
    start.head(small.estimate.size()) = small.estimate;
    warm.initial = start;
    const FitResult big = fit_mle(data, 2, ObjectiveKind::gaussian, warm);
    if (glr_test(small.objective_value, big.objective_value, 4, data.length()).p_value < 0.05) {
      ++rejections;
    }
  }
  const double rate = static_cast<double>(rejections) / reps;
  MESSAGE("rejection rate " << rate);
  CHECK(rate >= 0.01);
  CHECK(rate <= 0.12);
}
