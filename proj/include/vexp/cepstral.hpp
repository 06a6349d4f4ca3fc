#pragma once

#include <vector>

#include "vexp/polynomial.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// Wold truncation used when the caller does not pick one.
inline constexpr Index kDefaultWoldTruncation = 15;

/// VEXP(q) model: Wold filter exp{Omega_1 z + ... + Omega_q z^q} driven by
/// white noise with covariance exp(Omega_0). Omega_0 is symmetric; the other
/// cepstral matrices are unconstrained, and every such model is stable and
/// invertible.
class CepstralModel {
 public:
  CepstralModel() = default;

  /// Omega_0 must be symmetric up to rounding (it is symmetrized exactly);
  /// a visibly asymmetric matrix is rejected.
  CepstralModel(Matrix omega0, std::vector<Matrix> omegas);

  static CepstralModel zero(Index m, Index q);

  Index dim() const { return omega0_.rows(); }
  Index order() const { return static_cast<Index>(omegas_.size()); }
  const Matrix& omega0() const { return omega0_; }
  const std::vector<Matrix>& omegas() const { return omegas_; }
  /// Omega_k for k = 1..q.
  const Matrix& omega(Index k) const { return omegas_.at(static_cast<std::size_t>(k - 1)); }

  /// Every parameter multiplied by -1. Its spectrum is the inverse spectrum
  /// only when the Omega_k commute with their transposes (always for m = 1).
  CepstralModel negated() const;
  /// Omega_0 -> -Omega_0, Omega_k -> -Omega_k'. Its spectrum is the transpose
  /// of the inverse spectrum for every model.
  CepstralModel inverse_transposed() const;
  /// Keeps Omega_1..Omega_q' (q' <= q).
  CepstralModel truncated(Index q) const;

  friend bool operator==(const CepstralModel& a, const CepstralModel& b);

 private:
  Matrix omega0_;
  std::vector<Matrix> omegas_;
};

/// Length of the flat parameter vector: m(m+1)/2 + q m^2.
Index param_count(Index m, Index q);

/// Flat layout: lower triangle of Omega_0 by columns, then vec(Omega_1), ...,
/// vec(Omega_q), each vec stacking columns.
Vector to_vector(const CepstralModel& model);
CepstralModel to_model(const Vector& params, Index m, Index q);

/// Wold coefficients Psi_0..Psi_M of exp{Omega(z)} with Psi_0 = I, via
/// Psi_k = sum_{l=1..k} [Upsilon(z)^l]_{k-l} / l!,  Upsilon(z) = Omega(z)/z.
MatrixPolynomial wold_from_cepstral(const CepstralModel& model, Index M);

/// Inverse of the above on Omega_1..Omega_q:
/// Omega_k = -sum_{l=1..k} (-1)^l/l [Xi(z)^l]_{k-l},  Xi(z) = (Psi(z) - I)/z.
/// Throws std::invalid_argument unless Psi_0 == I.
std::vector<Matrix> cepstral_from_wold(const MatrixPolynomial& psi, Index q);

/// Innovation covariance exp(Omega_0).
Matrix innovation_covariance(const CepstralModel& model);

}  // namespace vexp
