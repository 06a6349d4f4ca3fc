#include "vexp/matrix_exp.hpp"

#include <algorithm>
#include <cmath>

namespace vexp {
namespace {

template <typename Mat>
void check_square_finite(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square (" +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                ")");
  }
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

template <typename Mat>
Mat exp_scaling_squaring(const Mat& a) {
  check_square_finite(a, "matrix_exp");
  const Index n = a.rows();
  if (n == 0) return a;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
  const Mat scaled = a / std::ldexp(1.0, squarings);

  // ||scaled|| <= 1/2, so the k-th term is bounded by 2^-k / k!.
  Mat sum = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
    const double tn = term.cwiseAbs().colwise().sum().maxCoeff();
    if (tn <= 1e-18 * sum.cwiseAbs().colwise().sum().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

template <typename F>
Matrix symmetric_function(const Matrix& a, F f, const char* what) {
  check_square_finite(a, what);
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": eigendecomposition failed");
  }
  Vector d = es.eigenvalues().unaryExpr(f);
  Matrix out = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

Matrix matrix_exp(const Matrix& a) { return exp_scaling_squaring(a); }
CMatrix matrix_exp(const CMatrix& a) { return exp_scaling_squaring(a); }

Matrix symmetric_exp(const Matrix& a) {
  return symmetric_function(a, [](double x) { return std::exp(x); }, "symmetric_exp");
}

Matrix symmetric_log(const Matrix& a) {
  check_square_finite(a, "symmetric_log");
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NumericalError("symmetric_log: matrix is not positive definite");
  }
  return symmetric_function(a, [](double x) { return std::log(x); }, "symmetric_log");
}

Matrix symmetric_sqrt(const Matrix& a) {
  return symmetric_function(
      a, [](double x) { return std::sqrt(std::max(x, 0.0)); }, "symmetric_sqrt");
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace vexp
