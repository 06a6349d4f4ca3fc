#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/likelihood.hpp"
#include "vexp/mle.hpp"
#include "vexp/polynomial.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// Infinite-past h-step forecast filter Pi(z) = z^{-h} [Psi]_h^inf(z) Psi^{-1}(z),
/// with Psi^{-1}(z) = exp{-Omega(z)}; returns Pi_0..Pi_{M-h}. Requires
/// 1 <= h <= M.
MatrixPolynomial forecast_filter(const CepstralModel& model, Index h, Index M);

struct ForecastResult {
  Index horizon = 0;
  double coverage = 0.95;
  Matrix point;       // horizon x m
  Matrix half_width;  // horizon x m
  Matrix lower;       // horizon x m
  Matrix upper;       // horizon x m
  /// Conditional covariance of X_{T+j}, j = 1..horizon (plug-in forecasts only).
  std::vector<Matrix> variance;
};

/// Conditional-Gaussian forecast of X_{T+1..T+h} given the panel, with the
/// mean delta removed before and added back after. M = 0 selects
/// default_wold_truncation(q).
ForecastResult forecast(const DataPanel& data, const CepstralModel& model, const Vector& delta,
                        Index h, double coverage = 0.95, Index M = 0);

/// Mixture over parameter draws: each draw contributes its conditional
/// Gaussian; intervals are quantiles of the equal-weight mixture.
ForecastResult posterior_predictive_forecast(const DataPanel& data,
                                             std::span<const CepstralModel> models,
                                             std::span<const Vector> deltas, Index h,
                                             double coverage = 0.95, Index M = 0,
                                             Exec exec = Exec::parallel);

/// T x m sample path: MA(M) filter of iid N(0, exp(Omega_0)) innovations
/// (symmetric square root), plus delta. Deterministic given the seed.
DataPanel simulate(const CepstralModel& model, const Vector& delta, Index T, std::uint64_t seed,
                   Index M = 0, Index burn = 0);

/// X_t = c + A X_{t-1} + e_t by least squares.
struct Var1 {
  Vector intercept;
  Matrix coefficient;
  Matrix residual_covariance;
};
Var1 fit_var1(const DataPanel& data);
/// Iterated forecasts of the next h values after the panel's last row.
Matrix forecast_var1(const Var1& var, const DataPanel& data, Index h);

/// Holds out the last `holdout` rows, fits both models on the rest, and
/// scores the h-step path against the held-out values.
struct HoldoutComparison {
  Matrix actual;  // holdout x m
  Matrix vexp;    // holdout x m
  Matrix var1;    // holdout x m
  Vector mspe_vexp;  // per series
  Vector mspe_var1;  // per series
  FitResult fit;
};
HoldoutComparison holdout_comparison(const DataPanel& data, Index q, Index holdout = 12,
                                     ObjectiveKind kind = ObjectiveKind::gaussian,
                                     MleConfig config = {});

}  // namespace vexp
