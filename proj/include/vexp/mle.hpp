#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/likelihood.hpp"
#include "vexp/types.hpp"

namespace vexp {

enum class ObjectiveKind { gaussian, whittle, approx_whittle };

std::string to_string(ObjectiveKind kind);
/// Accepts "gaussian", "whittle", "approx_whittle" (or "approx-whittle").
ObjectiveKind parse_objective_kind(std::string_view name);

using Objective = std::function<double(const Vector&)>;

/// Per-observation deviance of a flat parameter vector for mean-zero data:
/// Gaussian deviance / T, or one of the Whittle forms (already per
/// observation). Thread-safe; M = 0 selects default_wold_truncation(q).
Objective make_objective(const DataPanel& centered, Index q, ObjectiveKind kind, Index M = 0,
                         Exec exec = Exec::serial);

struct MleConfig {
  Index M = 0;
  double grad_tol = 1e-6;
  int max_iter = 500;
  double grad_step = 1e-6;  // times (1 + |x_i|)
  double hess_step = 1e-4;  // times (1 + |x_i|)
  std::optional<Vector> initial;
  /// true entries are held at zero; empty means every coordinate is free.
  std::vector<bool> zero_mask;
  /// If positive, points with some |x_i| > box are treated as infeasible.
  double box = 0.0;
  bool std_errors = true;
  Exec exec = Exec::parallel;
};

struct FitResult {
  ObjectiveKind kind = ObjectiveKind::gaussian;
  Index q = 0;
  Index T = 0;
  CepstralModel model;
  Vector estimate;
  /// Per-observation objective at the estimate.
  double objective_value = 0.0;
  /// NaN where undefined (held at zero, or the Hessian is not positive
  /// definite in that direction).
  Vector std_errors;
  /// Approximate covariance 2 (T H)^{-1} over all coordinates; rows and
  /// columns of held coordinates are zero.
  Matrix covariance;
  std::vector<bool> zero_mask;
  Vector mean;  // sample mean removed before fitting
  /// Large-sample SE of the sample mean, sqrt(f(0)_jj / T) under the fit.
  Vector mean_std_errors;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // sup-norm over free coordinates
};

FitResult fit_mle(const DataPanel& data, Index q, ObjectiveKind kind,
                  const MleConfig& config = {});

/// Central-difference gradient with steps step * (1 + |x_i|).
Vector fd_gradient(const Objective& f, const Vector& x, double step, Exec exec = Exec::serial);

/// Central second differences with steps step * (1 + |x_i|). Symmetric by
/// construction; throws NumericalError naming the coordinate if the
/// objective is not finite near `at`.
Matrix numerical_hessian(const Objective& f, const Vector& at, double step,
                         Exec exec = Exec::serial);

struct CovarianceEstimate {
  Matrix covariance;
  Vector std_errors;  // NaN where the diagonal is not positive
};

/// 2 (T H)^{-1} from the Hessian H of a per-observation deviance.
CovarianceEstimate covariance_from_hessian(const Matrix& hessian, Index T);

struct GlrResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df = 0;
};

/// statistic = max(0, T (D_nested - D_nesting)) for per-observation
/// deviances; p-value from the chi-square(df) upper tail.
GlrResult glr_test(double deviance_nested, double deviance_nesting, int df, Index T);

/// Refits with every coefficient whose |estimate| < z * SE held at zero.
/// Omega_0 diagonal entries are never dropped.
FitResult sparsify_refit(const DataPanel& data, const FitResult& fit, double z = 1.96,
                         MleConfig config = {});

}  // namespace vexp
