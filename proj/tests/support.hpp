#pragma once

// Test-only helpers: seeded random models and independent oracles. Nothing
// here calls into the code path it is used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/covariance.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/types.hpp"

namespace vexp::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index m, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(m, m);
  for (Index i = 0; i < m * m; ++i) a.data()[i] = u(rng);
  return a;
}

inline Matrix random_symmetric(std::mt19937_64& rng, Index m, double scale = 1.0) {
  Matrix a = random_matrix(rng, m, scale);
  return 0.5 * (a + a.transpose());
}

inline CepstralModel random_model(std::mt19937_64& rng, Index m, Index q, double scale = 1.0,
                                  double omega0_scale = 1.0) {
  std::vector<Matrix> w;
  for (Index k = 0; k < q; ++k) w.push_back(random_matrix(rng, m, scale));
  return CepstralModel(random_symmetric(rng, m, omega0_scale), std::move(w));
}

/// exp(A) as a plain truncated Taylor sum.
template <typename Mat>
Mat taylor_exp(const Mat& a, int terms = 60) {
  Mat sum = Mat::Identity(a.rows(), a.cols());
  Mat term = sum;
  for (int k = 1; k < terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// exp{Omega(e^{-i lambda})} using the Taylor oracle (no scaling).
inline CMatrix wold_transfer(const CepstralModel& model, double lambda, int terms = 80) {
  const Index m = model.dim();
  CMatrix s = CMatrix::Zero(m, m);
  for (Index k = 1; k <= model.order(); ++k) {
    s += model.omega(k).cast<Complex>() * std::polar(1.0, -lambda * static_cast<double>(k));
  }
  return taylor_exp(s, terms);
}

/// Psi_k by a Riemann sum of the inverse Fourier transform of exp{Omega(z)}.
inline std::vector<Matrix> wold_by_quadrature(const CepstralModel& model, Index K,
                                              int n = 512) {
  const Index m = model.dim();
  std::vector<CMatrix> acc(static_cast<std::size_t>(K + 1), CMatrix::Zero(m, m));
  for (int j = 0; j < n; ++j) {
    const double lambda = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    const CMatrix e = wold_transfer(model, lambda);
    for (Index k = 0; k <= K; ++k) {
      acc[static_cast<std::size_t>(k)] += e * std::polar(1.0, lambda * static_cast<double>(k));
    }
  }
  std::vector<Matrix> out;
  for (auto& a : acc) out.push_back((a / static_cast<double>(n)).real());
  return out;
}

/// Spectrum exp{Omega(z)} exp(Omega_0) exp{Omega(z)}^* with Taylor oracles.
inline CMatrix spectrum_oracle(const CepstralModel& model, double lambda) {
  const CMatrix e = wold_transfer(model, lambda);
  const CMatrix sigma = taylor_exp(CMatrix(model.omega0().cast<Complex>()), 80);
  return e * sigma * e.adjoint();
}

/// Gamma_h = (1/2pi) int f(lambda) e^{i h lambda} d lambda on an n-point
/// periodic trapezoid grid.
inline std::vector<Matrix> acf_by_quadrature(const CepstralModel& model, Index H, int n = 4096) {
  const Index m = model.dim();
  std::vector<CMatrix> acc(static_cast<std::size_t>(H + 1), CMatrix::Zero(m, m));
  for (int j = 0; j < n; ++j) {
    const double lambda = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    const CMatrix f = spectrum_oracle(model, lambda);
    for (Index h = 0; h <= H; ++h) {
      acc[static_cast<std::size_t>(h)] += f * std::polar(1.0, lambda * static_cast<double>(h));
    }
  }
  std::vector<Matrix> out;
  for (auto& a : acc) out.push_back((a / static_cast<double>(n)).real());
  return out;
}

/// Explicit mT x mT block Toeplitz covariance, block (s,t) = Gamma_{s-t}.
inline Matrix block_toeplitz(const AcfSequence& acf, Index T) {
  const Index m = acf.m;
  Matrix g = Matrix::Zero(m * T, m * T);
  for (Index s = 0; s < T; ++s) {
    for (Index t = 0; t < T; ++t) g.block(s * m, t * m, m, m) = acf.lag(s - t);
  }
  return g;
}

/// Stacks rows of a T x m panel into vec{X_1, ..., X_T}.
inline Vector stack(const Matrix& x) {
  Vector v(x.size());
  for (Index t = 0; t < x.rows(); ++t) v.segment(t * x.cols(), x.cols()) = x.row(t).transpose();
  return v;
}

/// Dense deviance: factorize the full covariance and solve.
inline double dense_deviance(const AcfSequence& acf, const Matrix& x) {
  const Matrix g = block_toeplitz(acf, x.rows());
  Eigen::LLT<Matrix> llt(g);
  const Vector v = stack(x);
  const Matrix& l = llt.matrixL();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  return logdet + v.dot(llt.solve(v));
}

/// Bivariate VEXP(4) with a sparse pattern (several exact zeros), delta = 0.
inline CepstralModel sparse_design() {
  auto vec = [](double a, double b, double c, double d) {
    Matrix w(2, 2);
    w << a, c, b, d;  // column-major fill
    return w;
  };
  return CepstralModel(vec(1.305, 0.030, 0.030, -2.455),
                       {vec(0.320, -1.170, 0.000, 0.250), vec(0.120, 1.505, 0.000, 0.210),
                        vec(0.135, -0.110, 0.000, 0.045), vec(0.130, -2.560, 0.000, 0.000)});
}

/// Bivariate VEXP(4) with every coefficient non-zero, delta = 0.
inline CepstralModel dense_design() {
  auto vec = [](double a, double b, double c, double d) {
    Matrix w(2, 2);
    w << a, c, b, d;
    return w;
  };
  return CepstralModel(vec(-0.249, 0.211, 0.211, -0.023),
                       {vec(1.343, 0.081, 0.073, 0.803), vec(0.261, 0.169, -0.109, 0.432),
                        vec(-0.108, 0.160, 0.138, 0.234), vec(0.127, 0.080, 0.114, 0.244)});
}

/// (1/2pi) int tr{I_T(l) f^{-1}(l)} dl plus tr Omega_0, by an n-point
/// periodic rule with the spectrum inverted numerically.
inline double whittle_by_quadrature(const CepstralModel& model, const Matrix& x, int n) {
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double l = -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
    const CMatrix f = spectrum_oracle(model, l);
    acc += (periodogram(x, l) * f.inverse()).trace().real();
  }
  return model.omega0().trace() + acc / n;
}

/// max |a_ij - b_ij|
inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace vexp::testing
