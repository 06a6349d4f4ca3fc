#include "vexp/cepstral.hpp"

#include <cmath>
#include <string>

#include "vexp/matrix_exp.hpp"

namespace vexp {

CepstralModel::CepstralModel(Matrix omega0, std::vector<Matrix> omegas)
    : omega0_(std::move(omega0)), omegas_(std::move(omegas)) {
  const Index m = omega0_.rows();
  if (m <= 0 || omega0_.cols() != m) {
    throw std::invalid_argument("CepstralModel: omega0 must be a non-empty square matrix");
  }
  if (!omega0_.allFinite()) throw std::invalid_argument("CepstralModel: omega0 is not finite");
  const double asym = (omega0_ - omega0_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(1.0, omega0_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("CepstralModel: omega0 is not symmetric");
  }
  omega0_ = (0.5 * (omega0_ + omega0_.transpose())).eval();
  for (std::size_t k = 0; k < omegas_.size(); ++k) {
    const Matrix& w = omegas_[k];
    if (w.rows() != m || w.cols() != m) {
      throw std::invalid_argument("CepstralModel: omega" + std::to_string(k + 1) +
                                  " has wrong dimensions");
    }
    if (!w.allFinite()) {
      throw std::invalid_argument("CepstralModel: omega" + std::to_string(k + 1) +
                                  " is not finite");
    }
  }
}

CepstralModel CepstralModel::zero(Index m, Index q) {
  return CepstralModel(Matrix::Zero(m, m),
                       std::vector<Matrix>(static_cast<std::size_t>(q), Matrix::Zero(m, m)));
}

CepstralModel CepstralModel::negated() const {
  std::vector<Matrix> w;
  w.reserve(omegas_.size());
  for (const auto& o : omegas_) w.push_back(-o);
  return CepstralModel(-omega0_, std::move(w));
}

CepstralModel CepstralModel::inverse_transposed() const {
  std::vector<Matrix> w;
  w.reserve(omegas_.size());
  for (const auto& o : omegas_) w.push_back(-o.transpose());
  return CepstralModel(-omega0_, std::move(w));
}

CepstralModel CepstralModel::truncated(Index q) const {
  if (q < 0 || q > order()) throw std::invalid_argument("CepstralModel::truncated: bad order");
  return CepstralModel(omega0_, std::vector<Matrix>(omegas_.begin(), omegas_.begin() + q));
}

bool operator==(const CepstralModel& a, const CepstralModel& b) {
  if (a.dim() != b.dim() || a.order() != b.order()) return false;
  if (a.omega0_ != b.omega0_) return false;
  for (std::size_t k = 0; k < a.omegas_.size(); ++k) {
    if (a.omegas_[k] != b.omegas_[k]) return false;
  }
  return true;
}

Index param_count(Index m, Index q) { return m * (m + 1) / 2 + q * m * m; }

Vector to_vector(const CepstralModel& model) {
  const Index m = model.dim();
  Vector out(param_count(m, model.order()));
  Index pos = 0;
  for (Index c = 0; c < m; ++c) {
    for (Index r = c; r < m; ++r) out[pos++] = model.omega0()(r, c);
  }
  for (const auto& w : model.omegas()) {
    for (Index c = 0; c < m; ++c) {
      for (Index r = 0; r < m; ++r) out[pos++] = w(r, c);
    }
  }
  return out;
}

CepstralModel to_model(const Vector& params, Index m, Index q) {
  if (m <= 0 || q < 0) throw std::invalid_argument("to_model: bad dimensions");
  if (params.size() != param_count(m, q)) {
    throw std::invalid_argument("to_model: expected " + std::to_string(param_count(m, q)) +
                                " parameters, got " + std::to_string(params.size()));
  }
  Matrix omega0(m, m);
  Index pos = 0;
  for (Index c = 0; c < m; ++c) {
    for (Index r = c; r < m; ++r) {
      omega0(r, c) = params[pos];
      omega0(c, r) = params[pos];
      ++pos;
    }
  }
  std::vector<Matrix> omegas(static_cast<std::size_t>(q), Matrix(m, m));
  for (auto& w : omegas) {
    for (Index c = 0; c < m; ++c) {
      for (Index r = 0; r < m; ++r) w(r, c) = params[pos++];
    }
  }
  return CepstralModel(std::move(omega0), std::move(omegas));
}

namespace {

// Sum_{l>=1} weight(l) [S(z)^l]_{k-l} for k = 1..M, where S(z) is the shifted
// series (coefficients `shifted`). Powers are chained as P_l = P_{l-1} * S and
// only coefficients that can still reach index M are kept.
template <typename Weight>
std::vector<Matrix> power_series_sum(Index m, const std::vector<Matrix>& shifted, Index M,
                                     Weight weight) {
  std::vector<Matrix> out(static_cast<std::size_t>(M + 1), Matrix::Zero(m, m));
  if (shifted.empty() || M < 1) return out;
  const MatrixPolynomial base(m, shifted);
  MatrixPolynomial power = MatrixPolynomial::identity(m, 0);
  for (Index l = 1; l <= M; ++l) {
    power = poly_mul_trunc(power, base, M - l);
    const double w = weight(l);
    for (Index j = 0; j <= power.truncation(); ++j) {
      out[static_cast<std::size_t>(j + l)] += w * power[j];
    }
  }
  return out;
}

}  // namespace

MatrixPolynomial wold_from_cepstral(const CepstralModel& model, Index M) {
  if (M < 1) throw std::invalid_argument("wold_from_cepstral: truncation M must be >= 1");
  const Index m = model.dim();
  // 1/l! is accumulated in a running product to avoid factorial overflow.
  std::vector<double> inv_fact(static_cast<std::size_t>(M + 1), 1.0);
  for (Index l = 1; l <= M; ++l) {
    inv_fact[static_cast<std::size_t>(l)] = inv_fact[static_cast<std::size_t>(l - 1)] / l;
  }
  auto coeffs = power_series_sum(m, model.omegas(), M,
                                 [&](Index l) { return inv_fact[static_cast<std::size_t>(l)]; });
  coeffs[0] = Matrix::Identity(m, m);
  return MatrixPolynomial(m, std::move(coeffs));
}

std::vector<Matrix> cepstral_from_wold(const MatrixPolynomial& psi, Index q) {
  const Index m = psi.dim();
  if (q < 0) throw std::invalid_argument("cepstral_from_wold: negative order");
  if ((psi[0] - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("cepstral_from_wold: leading Wold coefficient is not the identity");
  }
  if (q == 0) return {};
  std::vector<Matrix> shifted;
  for (Index j = 1; j <= std::min(psi.truncation(), q); ++j) shifted.push_back(psi[j]);
  auto coeffs = power_series_sum(m, shifted, q, [](Index l) {
    return -((l % 2 == 0) ? 1.0 : -1.0) / static_cast<double>(l);
  });
  return std::vector<Matrix>(coeffs.begin() + 1, coeffs.end());
}

Matrix innovation_covariance(const CepstralModel& model) {
  Matrix sigma = matrix_exp(model.omega0());
  return 0.5 * (sigma + sigma.transpose());
}

}  // namespace vexp
