#include "vexp/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "vexp/covariance.hpp"
#include "vexp/diagnostics.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::gaussian: return "gaussian";
    case ObjectiveKind::whittle: return "whittle";
    case ObjectiveKind::approx_whittle: return "approx_whittle";
  }
  return "unknown";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "gaussian") return ObjectiveKind::gaussian;
  if (name == "whittle") return ObjectiveKind::whittle;
  if (name == "approx_whittle" || name == "approx-whittle") return ObjectiveKind::approx_whittle;
  throw std::invalid_argument("unknown objective '" + std::string(name) +
                              "' (expected gaussian, whittle or approx_whittle)");
}

Objective make_objective(const DataPanel& centered, Index q, ObjectiveKind kind, Index M,
                         Exec exec) {
  const Index m = centered.dim();
  if (M == 0) M = default_wold_truncation(q);
  const double T = static_cast<double>(centered.length());
  switch (kind) {
    case ObjectiveKind::gaussian:
      return [=](const Vector& x) { return gaussian_deviance(to_model(x, m, q), centered, M) / T; };
    case ObjectiveKind::whittle:
      return [=](const Vector& x) { return whittle_deviance(to_model(x, m, q), centered, M); };
    case ObjectiveKind::approx_whittle: {
      auto grid = std::make_shared<const WhittleGrid>(centered);
      return [=](const Vector& x) { return grid->deviance(to_model(x, m, q), exec); };
    }
  }
  throw std::invalid_argument("make_objective: bad objective kind");
}

Vector fd_gradient(const Objective& f, const Vector& x, double step, Exec exec) {
  Vector g(x.size());
  parallel_for(static_cast<long>(x.size()), exec, [&](long i) {
    const double h = step * (1.0 + std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (xp[i] - xm[i]);
  });
  return g;
}

Matrix numerical_hessian(const Objective& f, const Vector& at, double step, Exec exec) {
  const Index n = at.size();
  Vector h(n);
  for (Index i = 0; i < n; ++i) h[i] = step * (1.0 + std::abs(at[i]));
  const double f0 = f(at);
  if (!std::isfinite(f0)) throw NumericalError("numerical_hessian: objective not finite at center");

  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i <= j; ++i) pairs.emplace_back(i, j);
  }
  Matrix H(n, n);
  parallel_for(static_cast<long>(pairs.size()), exec, [&](long k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    auto eval = [&](double di, double dj) {
      Vector x = at;
      x[i] += di;
      x[j] += dj;
      const double v = f(x);
      if (!std::isfinite(v)) {
        throw NumericalError(
            "numerical_hessian: objective not finite near coordinate " + std::to_string(i) +
            (i == j ? std::string() : " (paired with " + std::to_string(j) + ")"));
      }
      return v;
    };
    double value;
    if (i == j) {
      value = (eval(h[i], 0.0) - 2.0 * f0 + eval(-h[i], 0.0)) / (h[i] * h[i]);
    } else {
      value = (eval(h[i], h[j]) - eval(h[i], -h[j]) - eval(-h[i], h[j]) + eval(-h[i], -h[j])) /
              (4.0 * h[i] * h[j]);
    }
    H(i, j) = value;
    H(j, i) = value;
  });
  return H;
}

CovarianceEstimate covariance_from_hessian(const Matrix& hessian, Index T) {
  const Index n = hessian.rows();
  CovarianceEstimate out;
  out.std_errors = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  out.covariance = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  if (n == 0) return out;
  Eigen::FullPivLU<Matrix> lu(hessian);
  if (!lu.isInvertible()) return out;
  out.covariance = 2.0 * lu.inverse() / static_cast<double>(T);
  for (Index i = 0; i < n; ++i) {
    const double v = out.covariance(i, i);
    if (std::isfinite(v) && v > 0.0) out.std_errors[i] = std::sqrt(v);
  }
  return out;
}

GlrResult glr_test(double deviance_nested, double deviance_nesting, int df, Index T) {
  if (df <= 0) throw std::invalid_argument("glr_test: df must be positive");
  if (T <= 0) throw std::invalid_argument("glr_test: T must be positive");
  GlrResult out;
  out.df = df;
  out.statistic = std::max(0.0, static_cast<double>(T) * (deviance_nested - deviance_nesting));
  out.p_value = out.statistic > 0.0
                    ? boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * out.statistic)
                    : 1.0;
  return out;
}

namespace {

// Positions of the Omega_0 diagonal in the flat layout.
std::vector<Index> omega0_diagonal(Index m) {
  std::vector<Index> out;
  Index pos = 0;
  for (Index c = 0; c < m; ++c) {
    out.push_back(pos);
    pos += m - c;
  }
  return out;
}

struct Bfgs {
  Vector x;
  double f = 0.0;
  Vector g;
  int iterations = 0;
  bool converged = false;
};

Bfgs minimize(const Objective& f, Vector x, const MleConfig& cfg) {
  const Index n = x.size();
  Bfgs out;
  out.f = f(x);
  if (!std::isfinite(out.f)) {
    throw NumericalError("fit_mle: objective is not finite at the initial point");
  }
  out.g = fd_gradient(f, x, cfg.grad_step, cfg.exec);
  Matrix Hinv = Matrix::Identity(n, n);
  bool fresh = true;
  constexpr double kMaxStep = 2.0;  // sup-norm cap on a single move

  while (out.iterations < cfg.max_iter) {
    if (n == 0 || out.g.lpNorm<Eigen::Infinity>() < cfg.grad_tol) {
      out.converged = true;
      break;
    }
    Vector p = -Hinv * out.g;
    if (!(out.g.dot(p) < 0.0)) {
      Hinv.setIdentity();
      fresh = true;
      p = -out.g;
    }
    const double pmax = p.lpNorm<Eigen::Infinity>();
    if (pmax > kMaxStep) p *= kMaxStep / pmax;
    const double slope = out.g.dot(p);

    double alpha = 1.0;
    Vector xn;
    double fn = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + alpha * p;
      fn = f(xn);
      if (std::isfinite(fn) && fn <= out.f + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++out.iterations;
    if (!accepted) {
      if (fresh) break;  // steepest descent made no progress either
      Hinv.setIdentity();
      fresh = true;
      continue;
    }
    const Vector gn = fd_gradient(f, xn, cfg.grad_step, cfg.exec);
    const Vector s = xn - x;
    const Vector y = gn - out.g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (fresh) Hinv *= sy / y.squaredNorm();
      const double rho = 1.0 / sy;
      const Vector hy = Hinv * y;
      // (I - rho s y') H (I - rho y s') + rho s s'
      Hinv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
              rho * (hy * s.transpose() + s * hy.transpose());
      fresh = false;
    }
    x = xn;
    out.f = fn;
    out.g = gn;
  }
  out.x = std::move(x);
  return out;
}

}  // namespace

FitResult fit_mle(const DataPanel& data, Index q, ObjectiveKind kind, const MleConfig& config) {
  const Index m = data.dim();
  const Index T = data.length();
  if (T < 2) throw std::invalid_argument("fit_mle: need at least two observations");
  if (q < 0) throw std::invalid_argument("fit_mle: negative order");
  const Index n = param_count(m, q);
  if (T * m <= n) {
    warn("fit_mle: T*m = " + std::to_string(T * m) + " does not exceed the " + std::to_string(n) +
         " parameters");
  }
  std::vector<bool> mask = config.zero_mask;
  if (mask.empty()) mask.assign(static_cast<std::size_t>(n), false);
  if (static_cast<Index>(mask.size()) != n) {
    throw std::invalid_argument("fit_mle: zero mask has " + std::to_string(mask.size()) +
                                " entries, expected " + std::to_string(n));
  }

  const Vector mean = data.sample_mean();
  const DataPanel centered = data.centered(mean);
  const Index M = config.M > 0 ? config.M : default_wold_truncation(q);

  Vector start;
  if (config.initial) {
    start = *config.initial;
    if (start.size() != n) throw std::invalid_argument("fit_mle: initial point has wrong length");
  } else {
    const Matrix cov = centered.values().transpose() * centered.values() / static_cast<double>(T);
    std::vector<Matrix> w(static_cast<std::size_t>(q), Matrix::Zero(m, m));
    start = to_vector(CepstralModel(symmetric_log(cov), std::move(w)));
  }

  std::vector<Index> free;
  for (Index i = 0; i < n; ++i) {
    if (mask[static_cast<std::size_t>(i)]) {
      start[i] = 0.0;
    } else {
      free.push_back(i);
    }
  }
  const Index nf = static_cast<Index>(free.size());
  auto expand = [&free, start](const Vector& z) {
    Vector x = start;
    for (Index k = 0; k < static_cast<Index>(free.size()); ++k) x[free[k]] = z[k];
    return x;
  };

  const Objective full = make_objective(centered, q, kind, M, Exec::serial);
  const double box = config.box;
  const Objective reduced = [&](const Vector& z) {
    if (box > 0.0 && z.size() > 0 && z.lpNorm<Eigen::Infinity>() > box) {
      return std::numeric_limits<double>::infinity();
    }
    try {
      return full(expand(z));
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  Vector z0(nf);
  for (Index k = 0; k < nf; ++k) z0[k] = start[free[k]];
  const Bfgs opt = minimize(reduced, z0, config);

  FitResult out;
  out.kind = kind;
  out.q = q;
  out.T = T;
  out.estimate = expand(opt.x);
  out.model = to_model(out.estimate, m, q);
  out.objective_value = opt.f;
  out.iterations = opt.iterations;
  out.converged = opt.converged;
  out.gradient_norm = nf > 0 ? opt.g.lpNorm<Eigen::Infinity>() : 0.0;
  out.zero_mask = mask;
  out.mean = mean;
  // Var(sample mean) ~ sum_h Gamma_h / T = f(0) / T.
  out.mean_std_errors =
      (spectral_density(out.model, 0.0).value.diagonal().real() / static_cast<double>(T))
          .cwiseSqrt();
  out.std_errors = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  out.covariance = Matrix::Zero(n, n);
  if (!out.converged) {
    warn("fit_mle: no convergence after " + std::to_string(out.iterations) +
         " iterations (gradient sup-norm " + std::to_string(out.gradient_norm) + ")");
  }
  check_truncation(out.model, M);

  if (config.std_errors && nf > 0) {
    try {
      const Matrix H = numerical_hessian(reduced, opt.x, config.hess_step, config.exec);
      const auto est = covariance_from_hessian(H, T);
      for (Index a = 0; a < nf; ++a) {
        out.std_errors[free[a]] = est.std_errors[a];
        for (Index b = 0; b < nf; ++b) out.covariance(free[a], free[b]) = est.covariance(a, b);
      }
    } catch (const NumericalError& e) {
      warn(std::string("fit_mle: standard errors unavailable: ") + e.what());
    }
  }
  return out;
}

FitResult sparsify_refit(const DataPanel& data, const FitResult& fit, double z, MleConfig config) {
  const Index m = data.dim();
  const Index n = fit.estimate.size();
  std::vector<bool> mask = fit.zero_mask;
  if (mask.empty()) mask.assign(static_cast<std::size_t>(n), false);
  std::vector<bool> keep(static_cast<std::size_t>(n), false);
  for (Index d : omega0_diagonal(m)) keep[static_cast<std::size_t>(d)] = true;
  for (Index i = 0; i < n; ++i) {
    const double se = fit.std_errors[i];
    if (!keep[static_cast<std::size_t>(i)] && std::isfinite(se) &&
        std::abs(fit.estimate[i]) < z * se) {
      mask[static_cast<std::size_t>(i)] = true;
    }
  }
  config.zero_mask = mask;
  config.initial = fit.estimate;
  return fit_mle(data, fit.q, fit.kind, config);
}

}  // namespace vexp
