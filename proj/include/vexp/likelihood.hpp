#pragma once

#include <span>
#include <string>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/covariance.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// T x m panel of observations; rows are time points, columns are series.
class DataPanel {
 public:
  DataPanel() = default;
  explicit DataPanel(Matrix values, std::vector<std::string> names = {},
                     bool mean_removed = false);

  Index length() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }
  bool mean_removed() const { return mean_removed_; }

  Vector sample_mean() const;
  DataPanel demeaned() const;
  /// values minus a given mean vector in every row.
  DataPanel centered(const Vector& mean) const;
  DataPanel head(Index rows) const;

 private:
  Matrix values_;
  std::vector<std::string> names_;
  bool mean_removed_ = false;
};

/// Wold truncation for likelihood work: max(15, q + 25).
Index default_wold_truncation(Index q);

/// ||Psi_M|| / ||Psi_0|| (Frobenius); large values mean M is too small.
double truncation_ratio(const CepstralModel& model, Index M);

/// Warns when truncation_ratio exceeds 1e-6; returns whether M looks adequate.
bool check_truncation(const CepstralModel& model, Index M);

/// Result of the block Durbin-Levinson recursion over T steps for R panels.
struct PredictionErrors {
  /// sum_n log det V_n, the log-determinant of the mT x mT block Toeplitz
  /// covariance.
  double log_det = 0.0;
  /// gram(a, b) = sum_n e_{a,n}' V_n^{-1} e_{b,n}, i.e. X_a' Gamma^{-1} X_b.
  Matrix gram;
};

/// Multivariate Durbin-Levinson (Whittle) recursion. `acf` lags beyond its
/// stored maximum are zero. Every panel must be T x m with the same T.
/// Throws NumericalError naming the step when a prediction-error covariance
/// has minimum eigenvalue below 1e-12 * trace / m.
PredictionErrors durbin_levinson(const AcfSequence& acf, std::span<const Matrix> panels);

struct OneStepPrediction {
  Vector mean;      // E[X_{T+1} | X_1..X_T] for a mean-zero process
  Matrix variance;  // prediction-error covariance V_T
};
OneStepPrediction one_step_predictor(const AcfSequence& acf, const Matrix& panel);

/// log det Gamma + X' Gamma^{-1} X for mean-zero data; M = 0 selects
/// default_wold_truncation(q).
double gaussian_deviance(const CepstralModel& model, const DataPanel& data, Index M = 0);
double gaussian_deviance(const AcfSequence& acf, const Matrix& data);

/// Whittle deviance per observation: tr(Omega_0) + T^{-1} X' Gamma_{-w} X,
/// where Gamma_{-w} is built from the inverse autocovariances.
double whittle_deviance(const CepstralModel& model, const DataPanel& data, Index M = 0);

/// Periodograms at pi j / T, j = -T..T, kept for repeated evaluation of the
/// Fourier-grid Whittle deviance. `refine` = k uses pi j / (kT), j = -kT..kT.
class WhittleGrid {
 public:
  explicit WhittleGrid(const DataPanel& data, Index refine = 1);

  Index length() const { return T_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Weighted terms w_j tr{I_T(lambda_j) f_{-w}(lambda_j)}, one slot per
  /// frequency.
  std::vector<double> terms(const CepstralModel& model, Exec exec) const;
  /// tr(Omega_0) + sum of terms, summed in frequency order.
  double deviance(const CepstralModel& model, Exec exec = Exec::parallel) const;

 private:
  Index T_ = 0;
  std::vector<double> lambdas_;
  std::vector<double> weights_;
  std::vector<Eigen::VectorXcd> dft_;  // d(lambda_j) / sqrt(T)
};

double approx_whittle_deviance(const CepstralModel& model, const DataPanel& data,
                               Exec exec = Exec::parallel);

}  // namespace vexp
