#include "vexp/likelihood.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vexp/diagnostics.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

DataPanel::DataPanel(Matrix values, std::vector<std::string> names, bool mean_removed)
    : values_(std::move(values)), names_(std::move(names)), mean_removed_(mean_removed) {
  if (!values_.allFinite()) throw std::invalid_argument("DataPanel: non-finite entries");
  if (names_.empty()) {
    for (Index j = 0; j < values_.cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  }
  if (static_cast<Index>(names_.size()) != values_.cols()) {
    throw std::invalid_argument("DataPanel: " + std::to_string(names_.size()) +
                                " names for " + std::to_string(values_.cols()) + " columns");
  }
}

Vector DataPanel::sample_mean() const {
  if (length() == 0) throw std::invalid_argument("DataPanel: empty panel has no mean");
  return values_.colwise().mean().transpose();
}

DataPanel DataPanel::demeaned() const {
  return DataPanel(values_.rowwise() - sample_mean().transpose(), names_, true);
}

DataPanel DataPanel::centered(const Vector& mean) const {
  if (mean.size() != dim()) throw std::invalid_argument("DataPanel::centered: bad mean length");
  return DataPanel(values_.rowwise() - mean.transpose(), names_, true);
}

DataPanel DataPanel::head(Index rows) const {
  if (rows < 0 || rows > length()) throw std::invalid_argument("DataPanel::head: bad row count");
  return DataPanel(values_.topRows(rows), names_, mean_removed_);
}

Index default_wold_truncation(Index q) { return std::max<Index>(kDefaultWoldTruncation, q + 25); }

double truncation_ratio(const CepstralModel& model, Index M) {
  const auto psi = wold_from_cepstral(model, M);
  return psi[M].norm() / psi[0].norm();
}

bool check_truncation(const CepstralModel& model, Index M) {
  const double ratio = truncation_ratio(model, M);
  if (ratio > 1e-6) {
    warn("Wold truncation M = " + std::to_string(M) + " may be inadequate (||Psi_M||/||Psi_0|| = " +
         std::to_string(ratio) + ")");
    return false;
  }
  return true;
}

namespace {

// Small dense kernels on column-major m x m blocks. D > 0 fixes the
// dimension at compile time; D == 0 uses the runtime value.
template <int D>
struct Blocks {
  Index m;
  Index dim() const {
    if constexpr (D > 0) return D; else return m;
  }

  // c -= a * b
  void mul_sub(double* c, const double* a, const double* b) const {
    const Index n = dim();
    for (Index col = 0; col < n; ++col) {
      for (Index k = 0; k < n; ++k) {
        const double bk = b[k + col * n];
        for (Index r = 0; r < n; ++r) c[r + col * n] -= a[r + k * n] * bk;
      }
    }
  }
  // c = a * b
  void mul(double* c, const double* a, const double* b) const {
    const Index n = dim();
    std::fill(c, c + n * n, 0.0);
    for (Index col = 0; col < n; ++col) {
      for (Index k = 0; k < n; ++k) {
        const double bk = b[k + col * n];
        for (Index r = 0; r < n; ++r) c[r + col * n] += a[r + k * n] * bk;
      }
    }
  }
  // c = a' * b
  void mul_tn(double* c, const double* a, const double* b) const {
    const Index n = dim();
    for (Index col = 0; col < n; ++col) {
      for (Index r = 0; r < n; ++r) {
        double s = 0.0;
        for (Index k = 0; k < n; ++k) s += a[k + r * n] * b[k + col * n];
        c[r + col * n] = s;
      }
    }
  }
  // c -= a * b'
  void mul_nt_sub(double* c, const double* a, const double* b) const {
    const Index n = dim();
    for (Index col = 0; col < n; ++col) {
      for (Index k = 0; k < n; ++k) {
        const double bk = b[col + k * n];
        for (Index r = 0; r < n; ++r) c[r + col * n] -= a[r + k * n] * bk;
      }
    }
  }
  // y -= a * x
  void gemv_sub(double* y, const double* a, const double* x) const {
    const Index n = dim();
    for (Index k = 0; k < n; ++k) {
      const double xk = x[k];
      for (Index r = 0; r < n; ++r) y[r] -= a[r + k * n] * xk;
    }
  }
  // y = a * x
  void gemv(double* y, const double* a, const double* x) const {
    const Index n = dim();
    std::fill(y, y + n, 0.0);
    for (Index k = 0; k < n; ++k) {
      const double xk = x[k];
      for (Index r = 0; r < n; ++r) y[r] += a[r + k * n] * xk;
    }
  }
  void symmetrize(double* a) const {
    const Index n = dim();
    for (Index c = 0; c < n; ++c) {
      for (Index r = c + 1; r < n; ++r) {
        const double v = 0.5 * (a[r + c * n] + a[c + r * n]);
        a[r + c * n] = v;
        a[c + r * n] = v;
      }
    }
  }

  // Inverse and log-determinant of a symmetric matrix through its Cholesky
  // factor. `work` needs n*n doubles. Returns false when a pivot is not
  // positive.
  bool spd_inverse(const double* a, double* inv, double* work, double& log_det) const {
    const Index n = dim();
    double* l = work;
    std::fill(l, l + n * n, 0.0);
    log_det = 0.0;
    for (Index j = 0; j < n; ++j) {
      double d = a[j + j * n];
      for (Index k = 0; k < j; ++k) d -= l[j + k * n] * l[j + k * n];
      if (!(d > 0.0)) return false;
      const double ljj = std::sqrt(d);
      l[j + j * n] = ljj;
      log_det += 2.0 * std::log(ljj);
      for (Index i = j + 1; i < n; ++i) {
        double s = a[i + j * n];
        for (Index k = 0; k < j; ++k) s -= l[i + k * n] * l[j + k * n];
        l[i + j * n] = s / ljj;
      }
    }
    // inv = L^{-T} L^{-1}, column by column.
    for (Index col = 0; col < n; ++col) {
      double* x = inv + col * n;
      for (Index i = 0; i < n; ++i) {
        double s = (i == col) ? 1.0 : 0.0;
        for (Index k = 0; k < i; ++k) s -= l[i + k * n] * x[k];
        x[i] = s / l[i + i * n];
      }
      for (Index i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (Index k = i + 1; k < n; ++k) s -= l[k + i * n] * x[k];
        x[i] = s / l[i + i * n];
      }
    }
    symmetrize(inv);
    return true;
  }
};

[[noreturn]] void singular_step(Index step, const char* which, double min_eig) {
  throw NumericalError("durbin_levinson: " + std::string(which) +
                       " prediction-error covariance is numerically singular at step " +
                       std::to_string(step) + " (min eigenvalue " + std::to_string(min_eig) +
                       ")");
}

// Cheap acceptance test first: lambda_min >= 1 / ||A^{-1}||_F. Only when that
// bound is inconclusive is the exact minimum eigenvalue computed.
void check_conditioning(Index n, const double* a, const double* inv, Index step,
                        const char* which) {
  double trace = 0.0, inv_fro = 0.0;
  for (Index i = 0; i < n; ++i) trace += a[i + i * n];
  for (Index i = 0; i < n * n; ++i) inv_fro += inv[i] * inv[i];
  const double threshold = 1e-12 * trace / static_cast<double>(n);
  if (1.0 / std::sqrt(inv_fro) >= threshold) return;
  const Eigen::Map<const Matrix> am(a, n, n);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(am, Eigen::EigenvaluesOnly)
                             .eigenvalues()
                             .minCoeff();
  if (min_eig < threshold) singular_step(step, which, min_eig);
}

struct LevinsonOutput {
  double log_det = 0.0;
  Matrix gram;
  Vector prediction;
  Matrix prediction_variance;
};

// Runs the recursion over `steps` time points. When `predict` is set, the
// panel holds steps - 1 rows and the last step yields the one-step predictor
// instead of a residual.
template <int D>
LevinsonOutput levinson(const AcfSequence& acf, std::span<const Matrix> panels, Index steps,
                        bool predict) {
  const Blocks<D> blk{acf.m};
  const Index m = blk.dim();
  const Index mm = m * m;
  const Index R = static_cast<Index>(panels.size());
  const Index H = acf.max_lag();

  // Row-major copies: x[r][t * m + i].
  std::vector<std::vector<double>> x(static_cast<std::size_t>(R));
  for (Index r = 0; r < R; ++r) {
    const Matrix& p = panels[static_cast<std::size_t>(r)];
    auto& xr = x[static_cast<std::size_t>(r)];
    xr.resize(static_cast<std::size_t>(p.rows() * m));
    for (Index t = 0; t < p.rows(); ++t) {
      for (Index i = 0; i < m; ++i) xr[static_cast<std::size_t>(t * m + i)] = p(t, i);
    }
  }
  // Lags 0..min(H, steps) in column-major blocks.
  const Index nlag = std::min(H, steps);
  std::vector<double> gam(static_cast<std::size_t>((nlag + 1) * mm));
  for (Index h = 0; h <= nlag; ++h) {
    std::copy_n(acf.gammas[static_cast<std::size_t>(h)].data(), mm,
                gam.begin() + static_cast<std::ptrdiff_t>(h * mm));
  }

  const auto sz = static_cast<std::size_t>(std::max<Index>(steps, 1) * mm);
  std::vector<double> F(sz), B(sz), Fn(2 * mm), Bn(2 * mm);
  std::vector<double> V(gam.begin(), gam.begin() + mm), Vt(V);
  std::vector<double> Vinv(mm), Vtinv(mm), work(mm), delta(mm), Fnn(mm), Bnn(mm), tmp(mm);
  std::vector<double> e(static_cast<std::size_t>(R * m)), w(static_cast<std::size_t>(R * m));

  LevinsonOutput out;
  out.gram = Matrix::Zero(R, R);
  auto Fj = [&](std::vector<double>& buf, Index j) { return buf.data() + (j - 1) * mm; };

  for (Index n = 0; n < steps; ++n) {
    double ld = 0.0;
    if (!blk.spd_inverse(V.data(), Vinv.data(), work.data(), ld)) singular_step(n, "forward", 0.0);
    check_conditioning(m, V.data(), Vinv.data(), n, "forward");

    const bool last = (n + 1 == steps);
    if (predict && last) {
      out.prediction = Vector::Zero(m);
      const auto& x0 = x[0];
      for (Index j = 1; j <= n; ++j) {
        blk.gemv_sub(out.prediction.data(), Fj(F, j), x0.data() + (n - j) * m);
      }
      out.prediction = -out.prediction;
      out.prediction_variance = Eigen::Map<const Matrix>(V.data(), m, m);
      break;
    }

    out.log_det += ld;
    for (Index r = 0; r < R; ++r) {
      const auto& xr = x[static_cast<std::size_t>(r)];
      double* er = e.data() + r * m;
      std::copy_n(xr.data() + n * m, m, er);
      for (Index j = 1; j <= n; ++j) blk.gemv_sub(er, Fj(F, j), xr.data() + (n - j) * m);
      blk.gemv(w.data() + r * m, Vinv.data(), er);
    }
    for (Index a = 0; a < R; ++a) {
      for (Index b = 0; b < R; ++b) {
        double s = 0.0;
        for (Index i = 0; i < m; ++i) s += e[static_cast<std::size_t>(a * m + i)] *
                                           w[static_cast<std::size_t>(b * m + i)];
        out.gram(a, b) += s;
      }
    }
    if (last) break;

    // Delta_n = Gamma(n+1) - sum_j F_{n,j} Gamma(n+1-j); lags beyond H vanish.
    if (n + 1 <= nlag) {
      std::copy_n(gam.data() + (n + 1) * mm, mm, delta.data());
    } else {
      std::fill(delta.begin(), delta.end(), 0.0);
    }
    for (Index j = std::max<Index>(1, n + 1 - nlag); j <= n; ++j) {
      blk.mul_sub(delta.data(), Fj(F, j), gam.data() + (n + 1 - j) * mm);
    }

    double ldt = 0.0;
    if (!blk.spd_inverse(Vt.data(), Vtinv.data(), work.data(), ldt)) {
      singular_step(n, "backward", 0.0);
    }
    check_conditioning(m, Vt.data(), Vtinv.data(), n, "backward");

    blk.mul(Fnn.data(), delta.data(), Vtinv.data());   // Delta Vt^{-1}
    blk.mul_tn(tmp.data(), delta.data(), Vinv.data());  // Delta' V^{-1}
    std::copy(tmp.begin(), tmp.end(), Bnn.begin());

    // In place: F_j and F_{n+1-j} (likewise B) only depend on each other.
    for (Index j = 1, k = n; j <= k; ++j, --k) {
      if (j == k) {
        std::copy_n(Fj(F, j), mm, tmp.data());
        blk.mul_sub(Fj(F, j), Fnn.data(), Fj(B, j));
        blk.mul_sub(Fj(B, j), Bnn.data(), tmp.data());
        continue;
      }
      std::copy_n(Fj(F, j), mm, Fn.data());
      std::copy_n(Fj(F, k), mm, Fn.data() + mm);
      std::copy_n(Fj(B, j), mm, Bn.data());
      std::copy_n(Fj(B, k), mm, Bn.data() + mm);
      blk.mul_sub(Fj(F, j), Fnn.data(), Bn.data() + mm);
      blk.mul_sub(Fj(F, k), Fnn.data(), Bn.data());
      blk.mul_sub(Fj(B, j), Bnn.data(), Fn.data() + mm);
      blk.mul_sub(Fj(B, k), Bnn.data(), Fn.data());
    }
    std::copy(Fnn.begin(), Fnn.end(), Fj(F, n + 1));
    std::copy(Bnn.begin(), Bnn.end(), Fj(B, n + 1));

    blk.mul_nt_sub(V.data(), Fnn.data(), delta.data());  // V - Fnn Delta'
    blk.mul_sub(Vt.data(), Bnn.data(), delta.data());    // Vt - Bnn Delta
    blk.symmetrize(V.data());
    blk.symmetrize(Vt.data());
  }
  return out;
}

LevinsonOutput dispatch_levinson(const AcfSequence& acf, std::span<const Matrix> panels,
                                 Index steps, bool predict) {
  switch (acf.m) {
    case 1: return levinson<1>(acf, panels, steps, predict);
    case 2: return levinson<2>(acf, panels, steps, predict);
    case 3: return levinson<3>(acf, panels, steps, predict);
    default: return levinson<0>(acf, panels, steps, predict);
  }
}

void check_panels(const AcfSequence& acf, std::span<const Matrix> panels) {
  if (panels.empty()) throw std::invalid_argument("durbin_levinson: no panels");
  const Index T = panels[0].rows();
  for (const auto& p : panels) {
    if (p.rows() != T || p.cols() != acf.m) {
      throw std::invalid_argument("durbin_levinson: panel shape mismatch");
    }
  }
  if (acf.gammas.empty()) throw std::invalid_argument("durbin_levinson: empty autocovariance");
}

}  // namespace

PredictionErrors durbin_levinson(const AcfSequence& acf, std::span<const Matrix> panels) {
  check_panels(acf, panels);
  const Index T = panels[0].rows();
  if (T < 1) throw std::invalid_argument("durbin_levinson: empty data");
  auto out = dispatch_levinson(acf, panels, T, false);
  return {out.log_det, std::move(out.gram)};
}

OneStepPrediction one_step_predictor(const AcfSequence& acf, const Matrix& panel) {
  const std::array<Matrix, 1> panels{panel};
  check_panels(acf, panels);
  auto out = dispatch_levinson(acf, panels, panel.rows() + 1, true);
  return {std::move(out.prediction), std::move(out.prediction_variance)};
}

double gaussian_deviance(const AcfSequence& acf, const Matrix& data) {
  const std::array<Matrix, 1> panels{data};
  const auto pe = durbin_levinson(acf, panels);
  return pe.log_det + pe.gram(0, 0);
}

double gaussian_deviance(const CepstralModel& model, const DataPanel& data, Index M) {
  if (data.dim() != model.dim()) {
    throw std::invalid_argument("gaussian_deviance: data and model dimensions differ");
  }
  if (M == 0) M = default_wold_truncation(model.order());
  const Index H = std::min(data.length() - 1, M);
  return gaussian_deviance(acf_of_model(model, H, M), data.values());
}

double whittle_deviance(const CepstralModel& model, const DataPanel& data, Index M) {
  if (data.dim() != model.dim()) {
    throw std::invalid_argument("whittle_deviance: data and model dimensions differ");
  }
  const Index T = data.length();
  if (T < 1) throw std::invalid_argument("whittle_deviance: empty data");
  if (M == 0) M = default_wold_truncation(model.order());
  const Index H = std::min(T - 1, M);
  const AcfSequence inv = inverse_acf(model, H, M);
  const Matrix& X = data.values();
  // sum_{s,t} X_s' G_{s-t} X_t = sum_t X_t' G_0 X_t + 2 sum_{h>=1} sum_t X_{t+h}' G_h X_t
  double quad = (X * inv.gammas[0]).cwiseProduct(X).sum();
  for (Index h = 1; h <= H; ++h) {
    const auto lead = X.bottomRows(T - h);
    const auto lag = X.topRows(T - h);
    quad += 2.0 * (lag * inv.gammas[static_cast<std::size_t>(h)].transpose())
                      .cwiseProduct(lead)
                      .sum();
  }
  return model.omega0().trace() + quad / static_cast<double>(T);
}

WhittleGrid::WhittleGrid(const DataPanel& data, Index refine) : T_(data.length()) {
  if (T_ < 2) throw std::invalid_argument("WhittleGrid: need T >= 2");
  if (refine < 1) throw std::invalid_argument("WhittleGrid: refinement must be >= 1");
  const Index K = refine * T_;
  const Index n = 2 * K + 1;
  lambdas_.resize(static_cast<std::size_t>(n));
  weights_.assign(static_cast<std::size_t>(n), 1.0 / (2.0 * static_cast<double>(K)));
  // +-pi are the same point on the circle: trapezoid end weights.
  weights_.front() *= 0.5;
  weights_.back() *= 0.5;
  dft_.resize(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(T_));
  const Matrix& X = data.values();
  for (Index j = -K; j <= K; ++j) {
    const auto s = static_cast<std::size_t>(j + K);
    const double lambda = std::numbers::pi * static_cast<double>(j) / static_cast<double>(K);
    lambdas_[s] = lambda;
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(X.cols());
    for (Index t = 0; t < T_; ++t) {
      d += X.row(t).transpose().cast<Complex>() * std::polar(1.0, -lambda * (t + 1));
    }
    dft_[s] = d * scale;
  }
}

std::vector<double> WhittleGrid::terms(const CepstralModel& model, Exec exec) const {
  const CepstralModel inv = model.inverse_transposed();
  std::vector<double> out(lambdas_.size());
  parallel_for(static_cast<long>(lambdas_.size()), exec, [&](long k) {
    const auto s = static_cast<std::size_t>(k);
    // f^{-1} is the transpose of the spectrum of inv; tr{I_T f^{-1}} =
    // d^* f^{-1} d / T with d already scaled by T^{-1/2}.
    const CMatrix finv = spectral_density(inv, lambdas_[s]).value.transpose();
    out[s] = weights_[s] * (dft_[s].adjoint() * finv * dft_[s])(0, 0).real();
  });
  return out;
}

double WhittleGrid::deviance(const CepstralModel& model, Exec exec) const {
  const auto t = terms(model, exec);
  double sum = 0.0;
  for (double v : t) sum += v;
  return model.omega0().trace() + sum;
}

double approx_whittle_deviance(const CepstralModel& model, const DataPanel& data, Exec exec) {
  if (data.dim() != model.dim()) {
    throw std::invalid_argument("approx_whittle_deviance: data and model dimensions differ");
  }
  return WhittleGrid(data).deviance(model, exec);
}

}  // namespace vexp
