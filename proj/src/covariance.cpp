#include "vexp/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vexp/matrix_exp.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

Matrix AcfSequence::lag(Index h) const {
  const Index a = h < 0 ? -h : h;
  if (a > max_lag()) return Matrix::Zero(m, m);
  const Matrix& g = gammas[static_cast<std::size_t>(a)];
  return h < 0 ? Matrix(g.transpose()) : g;
}

AcfSequence acf_from_wold(const MatrixPolynomial& psi, const Matrix& sigma, Index H) {
  const Index m = psi.dim();
  const Index M = psi.truncation();
  if (H < 0) throw std::invalid_argument("acf_from_wold: negative max lag");
  if (H > M) {
    throw std::invalid_argument("acf_from_wold: max lag " + std::to_string(H) +
                                " exceeds Wold truncation " + std::to_string(M));
  }
  if (sigma.rows() != m || sigma.cols() != m) {
    throw std::invalid_argument("acf_from_wold: sigma has wrong dimensions");
  }
  // Psi_j Sigma is shared across lags.
  std::vector<Matrix> ps(psi.size());
  for (Index j = 0; j <= M; ++j) ps[static_cast<std::size_t>(j)] = psi[j] * sigma;

  AcfSequence out{m, std::vector<Matrix>(static_cast<std::size_t>(H + 1), Matrix::Zero(m, m))};
  for (Index h = 0; h <= H; ++h) {
    Matrix& g = out.gammas[static_cast<std::size_t>(h)];
    for (Index j = 0; j + h <= M; ++j) {
      // (Psi_j Sigma)' = Sigma Psi_j' since Sigma is symmetric
      g.noalias() += psi[j + h] * ps[static_cast<std::size_t>(j)].transpose();
    }
  }
  out.gammas[0] = (0.5 * (out.gammas[0] + out.gammas[0].transpose())).eval();
  return out;
}

AcfSequence acf_of_model(const CepstralModel& model, Index H, Index M) {
  return acf_from_wold(wold_from_cepstral(model, M), innovation_covariance(model), H);
}

AcfSequence inverse_acf(const CepstralModel& model, Index H, Index M) {
  // f^{-1} = G^* Sigma^{-1} G with G = exp{-Omega(z)}; its transpose is the
  // spectrum of inverse_transposed(), so the lags come back transposed.
  AcfSequence out = acf_of_model(model.inverse_transposed(), H, M);
  for (auto& g : out.gammas) g = g.transpose().eval();
  return out;
}

SpectralMatrix spectral_density(const CepstralModel& model, double lambda) {
  const Index m = model.dim();
  CMatrix series = CMatrix::Zero(m, m);
  for (Index k = 1; k <= model.order(); ++k) {
    const Complex zk = std::polar(1.0, -lambda * static_cast<double>(k));
    series += model.omega(k).cast<Complex>() * zk;
  }
  const CMatrix e = matrix_exp(series);
  const CMatrix sigma = innovation_covariance(model).cast<Complex>();
  CMatrix f = e * sigma * e.adjoint();
  f = (0.5 * (f + f.adjoint())).eval();
  return {lambda, std::move(f)};
}

CMatrix inverse_spectral_density(const CepstralModel& model, double lambda) {
  return spectral_density(model.inverse_transposed(), lambda).value.transpose();
}

double squared_coherence(const CMatrix& f, Index i, Index j) {
  const double fii = f(i, i).real();
  const double fjj = f(j, j).real();
  if (!(fii > 0.0) || !(fjj > 0.0)) {
    throw NumericalError("squared_coherence: non-positive auto-spectrum");
  }
  const double c = std::norm(f(i, j)) / (fii * fjj);
  return std::clamp(c, 0.0, 1.0);
}

double squared_coherence(const CepstralModel& model, double lambda, Index i, Index j) {
  const Index m = model.dim();
  if (i < 0 || j < 0 || i >= m || j >= m || i == j) {
    throw std::invalid_argument("squared_coherence: bad component pair");
  }
  return squared_coherence(spectral_density(model, lambda).value, i, j);
}

double squared_coherence(const CepstralModel& model, double lambda) {
  if (model.dim() != 2) {
    throw std::invalid_argument("squared_coherence: unsupported dimension " +
                                std::to_string(model.dim()) +
                                " (select a component pair for m > 2)");
  }
  return squared_coherence(model, lambda, 0, 1);
}

CMatrix periodogram(const Matrix& data, double lambda) {
  const Index T = data.rows();
  if (T < 1) throw std::invalid_argument("periodogram: empty data");
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(data.cols());
  for (Index t = 0; t < T; ++t) {
    d += data.row(t).transpose().cast<Complex>() * std::polar(1.0, -lambda * (t + 1));
  }
  return (d * d.adjoint()) / static_cast<double>(T);
}

std::vector<double> frequency_grid(Index n) {
  if (n < 1) throw std::invalid_argument("frequency_grid: need at least one point");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index k = 1; k <= n; ++k) {
    out[static_cast<std::size_t>(k - 1)] = std::numbers::pi * k / static_cast<double>(n);
  }
  return out;
}

std::vector<SpectralMatrix> spectral_grid(const CepstralModel& model,
                                          std::span<const double> lambdas, Exec exec) {
  std::vector<SpectralMatrix> out(lambdas.size());
  parallel_for(static_cast<long>(lambdas.size()), exec, [&](long k) {
    const auto s = static_cast<std::size_t>(k);
    out[s] = spectral_density(model, lambdas[s]);
  });
  return out;
}

std::vector<double> coherence_grid(const CepstralModel& model, std::span<const double> lambdas,
                                   Index i, Index j, Exec exec) {
  std::vector<double> out(lambdas.size());
  parallel_for(static_cast<long>(lambdas.size()), exec, [&](long k) {
    const auto s = static_cast<std::size_t>(k);
    out[s] = squared_coherence(model, lambdas[s], i, j);
  });
  return out;
}

}  // namespace vexp
