#pragma once

#include <vector>

#include "vexp/types.hpp"

namespace vexp {

/// Truncated power series C_0 + C_1 z + ... + C_M z^M with m x m real
/// coefficients. Carrier for Wold filters, cepstral series and forecast
/// filters. Coefficients beyond the truncation are treated as zero.
class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  MatrixPolynomial(Index m, std::vector<Matrix> coeffs);

  /// I + 0 z + ... + 0 z^M.
  static MatrixPolynomial identity(Index m, Index truncation = 0);
  static MatrixPolynomial zero(Index m, Index truncation);

  Index dim() const { return m_; }
  Index truncation() const { return static_cast<Index>(coeffs_.size()) - 1; }
  std::size_t size() const { return coeffs_.size(); }

  const Matrix& operator[](Index k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  const std::vector<Matrix>& coeffs() const { return coeffs_; }

  /// Sum_k C_k z^k at a complex point.
  CMatrix evaluate(Complex z) const;

 private:
  Index m_ = 0;
  std::vector<Matrix> coeffs_;
};

/// Ordered product p(z) r(z) truncated at z^M:
/// out_k = sum_{j=0..k} p_j r_{k-j}. The order of the factors is respected.
MatrixPolynomial poly_mul_trunc(const MatrixPolynomial& p, const MatrixPolynomial& r, Index M);

}  // namespace vexp
