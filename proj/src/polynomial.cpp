#include "vexp/polynomial.hpp"

#include <algorithm>
#include <string>

namespace vexp {

MatrixPolynomial::MatrixPolynomial(Index m, std::vector<Matrix> coeffs)
    : m_(m), coeffs_(std::move(coeffs)) {
  if (m <= 0) throw std::invalid_argument("MatrixPolynomial: dimension must be positive");
  if (coeffs_.empty()) throw std::invalid_argument("MatrixPolynomial: no coefficients");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Matrix& c = coeffs_[k];
    if (c.rows() != m || c.cols() != m) {
      throw std::invalid_argument("MatrixPolynomial: coefficient " + std::to_string(k) +
                                  " is not " + std::to_string(m) + "x" + std::to_string(m));
    }
    if (!c.allFinite()) {
      throw std::invalid_argument("MatrixPolynomial: coefficient " + std::to_string(k) +
                                  " has non-finite entries");
    }
  }
}

MatrixPolynomial MatrixPolynomial::identity(Index m, Index truncation) {
  std::vector<Matrix> c(static_cast<std::size_t>(truncation + 1), Matrix::Zero(m, m));
  c[0] = Matrix::Identity(m, m);
  return MatrixPolynomial(m, std::move(c));
}

MatrixPolynomial MatrixPolynomial::zero(Index m, Index truncation) {
  return MatrixPolynomial(
      m, std::vector<Matrix>(static_cast<std::size_t>(truncation + 1), Matrix::Zero(m, m)));
}

CMatrix MatrixPolynomial::evaluate(Complex z) const {
  // Horner from the top coefficient.
  CMatrix acc = CMatrix::Zero(m_, m_);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * z + it->cast<Complex>();
  }
  return acc;
}

MatrixPolynomial poly_mul_trunc(const MatrixPolynomial& p, const MatrixPolynomial& r, Index M) {
  if (p.dim() != r.dim()) {
    throw std::invalid_argument("poly_mul_trunc: dimension mismatch (" +
                                std::to_string(p.dim()) + " vs " + std::to_string(r.dim()) +
                                ")");
  }
  if (M < 0) throw std::invalid_argument("poly_mul_trunc: negative truncation");
  const Index m = p.dim();
  std::vector<Matrix> out(static_cast<std::size_t>(M + 1), Matrix::Zero(m, m));
  const Index pt = p.truncation();
  const Index rt = r.truncation();
  for (Index i = 0; i <= std::min(pt, M); ++i) {
    const Matrix& pi = p[i];
    if (pi.isZero(0.0)) continue;
    for (Index j = 0; j <= std::min(rt, M - i); ++j) {
      out[static_cast<std::size_t>(i + j)].noalias() += pi * r[j];
    }
  }
  return MatrixPolynomial(m, std::move(out));
}

}  // namespace vexp
