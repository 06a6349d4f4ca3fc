#pragma once

#include <span>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/polynomial.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// Autocovariances Gamma_h = E[X_{t+h} X_t'] for h = 0..H. Negative lags are
/// implicit: Gamma_{-h} = Gamma_h'.
struct AcfSequence {
  Index m = 0;
  std::vector<Matrix> gammas;

  Index max_lag() const { return static_cast<Index>(gammas.size()) - 1; }
  /// Gamma_h for any integer h; zero beyond the stored lags.
  Matrix lag(Index h) const;
};

/// Gamma_h = sum_{j=0..M-h} Psi_{j+h} Sigma Psi_j'. Requires H <= M.
AcfSequence acf_from_wold(const MatrixPolynomial& psi, const Matrix& sigma, Index H);

AcfSequence acf_of_model(const CepstralModel& model, Index H, Index M);

/// Inverse autocovariances: Fourier coefficients of f^{-1}. For m = 1 these
/// are the autocovariances of the negated model; in general the Omega_k must
/// also be transposed, since exp{Omega(z)} and its adjoint need not commute.
AcfSequence inverse_acf(const CepstralModel& model, Index H, Index M);

struct SpectralMatrix {
  double lambda = 0.0;
  CMatrix value;  // Hermitian, nonnegative definite
};

/// f(lambda) = E Sigma E^*, E = exp{sum_k Omega_k e^{-i lambda k}}.
SpectralMatrix spectral_density(const CepstralModel& model, double lambda);

/// f(lambda)^{-1} = G^* exp(-Omega_0) G,  G = exp{-sum_k Omega_k e^{-i lambda k}}.
CMatrix inverse_spectral_density(const CepstralModel& model, double lambda);

/// |f_12|^2 / (f_11 f_22) for a bivariate model; throws for m != 2.
double squared_coherence(const CepstralModel& model, double lambda);
/// Pairwise squared coherence between components i and j (0-based).
double squared_coherence(const CepstralModel& model, double lambda, Index i, Index j);
double squared_coherence(const CMatrix& f, Index i, Index j);

/// I_T(lambda) = T^{-1} d d^*,  d = sum_{t=1..T} X_t e^{-i lambda t}.
/// `data` is T x m (rows are time points).
CMatrix periodogram(const Matrix& data, double lambda);

/// n equispaced frequencies pi k / n, k = 1..n.
std::vector<double> frequency_grid(Index n);

/// Spectral matrices over a frequency list; the parallel path fills the same
/// slots as the serial one.
std::vector<SpectralMatrix> spectral_grid(const CepstralModel& model,
                                          std::span<const double> lambdas,
                                          Exec exec = Exec::parallel);

std::vector<double> coherence_grid(const CepstralModel& model, std::span<const double> lambdas,
                                   Index i = 0, Index j = 1, Exec exec = Exec::parallel);

}  // namespace vexp
