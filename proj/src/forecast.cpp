#include "vexp/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "vexp/covariance.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

MatrixPolynomial forecast_filter(const CepstralModel& model, Index h, Index M) {
  if (h < 1) throw std::invalid_argument("forecast_filter: horizon must be >= 1");
  if (h > M) {
    throw std::invalid_argument("forecast_filter: horizon " + std::to_string(h) +
                                " exceeds truncation " + std::to_string(M));
  }
  const Index m = model.dim();
  const auto psi = wold_from_cepstral(model, M);
  std::vector<Matrix> negated;
  for (const auto& w : model.omegas()) negated.push_back(-w);
  const auto psi_inv = wold_from_cepstral(CepstralModel(Matrix::Zero(m, m), negated), M);
  std::vector<Matrix> tail;
  for (Index j = h; j <= M; ++j) tail.push_back(psi[j]);
  return poly_mul_trunc(MatrixPolynomial(m, std::move(tail)), psi_inv, M - h);
}

namespace {

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

void check_coverage(double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("forecast: coverage must lie in (0, 1)");
  }
}

// Conditional mean and per-step covariances of the next h values for a
// mean-zero panel.
struct Conditional {
  Matrix mean;  // h x m
  std::vector<Matrix> variance;
};

Conditional conditional_gaussian(const Matrix& x, const CepstralModel& model, Index h, Index M) {
  const Index T = x.rows();
  const Index m = x.cols();
  const Index H = std::min(T + h - 1, M);
  const AcfSequence acf = acf_of_model(model, H, M);
  const Index n = m * T;
  const Index k = m * h;
  // Stacked order: X_1..X_T, then X_{T+1}..X_{T+h}.
  Matrix g11(n, n), g21(k, n), g22(k, k);
  for (Index s = 0; s < T; ++s) {
    for (Index t = 0; t < T; ++t) g11.block(s * m, t * m, m, m) = acf.lag(s - t);
  }
  for (Index s = 0; s < h; ++s) {
    for (Index t = 0; t < T; ++t) g21.block(s * m, t * m, m, m) = acf.lag(T + s - t);
    for (Index t = 0; t < h; ++t) g22.block(s * m, t * m, m, m) = acf.lag(s - t);
  }
  Eigen::LLT<Matrix> llt(g11);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("forecast: singular conditioning covariance");
  }
  Vector v(n);
  for (Index t = 0; t < T; ++t) v.segment(t * m, m) = x.row(t).transpose();
  const Vector mu = g21 * llt.solve(v);
  const Matrix cond = g22 - g21 * llt.solve(Matrix(g21.transpose()));
  Conditional out{Matrix(h, m), {}};
  for (Index s = 0; s < h; ++s) {
    out.mean.row(s) = mu.segment(s * m, m).transpose();
    Matrix block = cond.block(s * m, s * m, m, m);
    out.variance.push_back((0.5 * (block + block.transpose())).eval());
  }
  return out;
}

void validate(const DataPanel& data, const CepstralModel& model, const Vector& delta, Index h) {
  if (data.dim() != model.dim()) throw std::invalid_argument("forecast: dimension mismatch");
  if (delta.size() != model.dim()) throw std::invalid_argument("forecast: delta has wrong length");
  if (h < 1) throw std::invalid_argument("forecast: horizon must be >= 1");
  if (data.length() < 1) throw std::invalid_argument("forecast: empty data");
}

}  // namespace

ForecastResult forecast(const DataPanel& data, const CepstralModel& model, const Vector& delta,
                        Index h, double coverage, Index M) {
  validate(data, model, delta, h);
  check_coverage(coverage);
  if (M == 0) M = default_wold_truncation(model.order());
  const Index m = model.dim();
  const Conditional c = conditional_gaussian(data.centered(delta).values(), model, h, M);
  const double z = normal_quantile(0.5 + 0.5 * coverage);
  ForecastResult out;
  out.horizon = h;
  out.coverage = coverage;
  out.point = c.mean.rowwise() + delta.transpose();
  out.half_width.resize(h, m);
  for (Index s = 0; s < h; ++s) {
    for (Index j = 0; j < m; ++j) {
      out.half_width(s, j) = z * std::sqrt(std::max(0.0, c.variance[s](j, j)));
    }
  }
  out.lower = out.point - out.half_width;
  out.upper = out.point + out.half_width;
  out.variance = c.variance;
  return out;
}

ForecastResult posterior_predictive_forecast(const DataPanel& data,
                                             std::span<const CepstralModel> models,
                                             std::span<const Vector> deltas, Index h,
                                             double coverage, Index M, Exec exec) {
  if (models.empty()) throw std::invalid_argument("posterior_predictive_forecast: no draws");
  if (models.size() != deltas.size()) {
    throw std::invalid_argument("posterior_predictive_forecast: models and deltas differ in count");
  }
  check_coverage(coverage);
  for (std::size_t d = 0; d < models.size(); ++d) validate(data, models[d], deltas[d], h);
  const Index m = data.dim();
  const std::size_t D = models.size();

  std::vector<Matrix> means(D), sds(D);
  parallel_for(static_cast<long>(D), exec, [&](long d) {
    const auto s = static_cast<std::size_t>(d);
    const Index Md = M > 0 ? M : default_wold_truncation(models[s].order());
    const Conditional c = conditional_gaussian(data.centered(deltas[s]).values(), models[s], h, Md);
    means[s] = c.mean.rowwise() + deltas[s].transpose();
    sds[s].resize(h, m);
    for (Index k = 0; k < h; ++k) {
      for (Index j = 0; j < m; ++j) sds[s](k, j) = std::sqrt(std::max(0.0, c.variance[k](j, j)));
    }
  });

  ForecastResult out;
  out.horizon = h;
  out.coverage = coverage;
  out.point = Matrix::Zero(h, m);
  for (const auto& mu : means) out.point += mu / static_cast<double>(D);
  out.lower.resize(h, m);
  out.upper.resize(h, m);
  const boost::math::normal_distribution<double> normal;
  for (Index k = 0; k < h; ++k) {
    for (Index j = 0; j < m; ++j) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t d = 0; d < D; ++d) {
        lo = std::min(lo, means[d](k, j) - 10.0 * sds[d](k, j));
        hi = std::max(hi, means[d](k, j) + 10.0 * sds[d](k, j));
      }
      auto cdf = [&](double x) {
        double acc = 0.0;
        for (std::size_t d = 0; d < D; ++d) {
          const double sd = sds[d](k, j);
          acc += sd > 0.0 ? boost::math::cdf(normal, (x - means[d](k, j)) / sd)
                          : (x >= means[d](k, j) ? 1.0 : 0.0);
        }
        return acc / static_cast<double>(D);
      };
      auto quantile = [&](double p) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
          const double mid = 0.5 * (a + b);
          (cdf(mid) < p ? a : b) = mid;
        }
        return 0.5 * (a + b);
      };
      out.lower(k, j) = quantile(0.5 - 0.5 * coverage);
      out.upper(k, j) = quantile(0.5 + 0.5 * coverage);
    }
  }
  out.half_width = 0.5 * (out.upper - out.lower);
  return out;
}

DataPanel simulate(const CepstralModel& model, const Vector& delta, Index T, std::uint64_t seed,
                   Index M, Index burn) {
  const Index m = model.dim();
  if (T < 1) throw std::invalid_argument("simulate: T must be >= 1");
  if (burn < 0) throw std::invalid_argument("simulate: negative burn-in");
  if (delta.size() != m) throw std::invalid_argument("simulate: delta has wrong length");
  if (M == 0) M = default_wold_truncation(model.order());
  const auto psi = wold_from_cepstral(model, M);
  const Matrix root = symmetric_sqrt(innovation_covariance(model));

  const Index n = T + burn + M;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix eps(n, m);
  Vector z(m);
  for (Index t = 0; t < n; ++t) {
    for (Index j = 0; j < m; ++j) z[j] = normal(rng);
    eps.row(t) = (root * z).transpose();
  }
  Matrix x(T, m);
  for (Index t = 0; t < T; ++t) {
    const Index now = M + burn + t;
    Vector acc = delta;
    for (Index j = 0; j <= M; ++j) acc.noalias() += psi[j] * eps.row(now - j).transpose();
    x.row(t) = acc.transpose();
  }
  return DataPanel(std::move(x));
}

Var1 fit_var1(const DataPanel& data) {
  const Index T = data.length();
  const Index m = data.dim();
  if (T < m + 3) throw std::invalid_argument("fit_var1: too few observations");
  const Matrix& x = data.values();
  Matrix design(T - 1, m + 1);
  design.col(0).setOnes();
  design.rightCols(m) = x.topRows(T - 1);
  const Matrix y = x.bottomRows(T - 1);
  const Matrix beta = design.colPivHouseholderQr().solve(y);  // (m+1) x m
  const Matrix resid = y - design * beta;
  Var1 out;
  out.intercept = beta.row(0).transpose();
  out.coefficient = beta.bottomRows(m).transpose();
  out.residual_covariance = resid.transpose() * resid / static_cast<double>(T - 1 - (m + 1));
  return out;
}

Matrix forecast_var1(const Var1& var, const DataPanel& data, Index h) {
  if (h < 1) throw std::invalid_argument("forecast_var1: horizon must be >= 1");
  Matrix out(h, data.dim());
  Vector prev = data.values().bottomRows(1).transpose();
  for (Index s = 0; s < h; ++s) {
    prev = var.intercept + var.coefficient * prev;
    out.row(s) = prev.transpose();
  }
  return out;
}

HoldoutComparison holdout_comparison(const DataPanel& data, Index q, Index holdout,
                                     ObjectiveKind kind, MleConfig config) {
  if (holdout < 1 || holdout >= data.length()) {
    throw std::invalid_argument("holdout_comparison: holdout must be in [1, T)");
  }
  const Index T = data.length() - holdout;
  const DataPanel train = data.head(T);
  HoldoutComparison out;
  out.actual = data.values().bottomRows(holdout);
  out.fit = fit_mle(train, q, kind, config);
  out.vexp = forecast(train, out.fit.model, out.fit.mean, holdout, 0.95, config.M).point;
  out.var1 = forecast_var1(fit_var1(train), train, holdout);
  out.mspe_vexp = (out.vexp - out.actual).array().square().colwise().mean().transpose();
  out.mspe_var1 = (out.var1 - out.actual).array().square().colwise().mean().transpose();
  return out;
}

}  // namespace vexp
