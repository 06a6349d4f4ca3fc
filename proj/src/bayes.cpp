#include "vexp/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vexp/covariance.hpp"
#include "vexp/diagnostics.hpp"
#include "vexp/matrix_exp.hpp"
#include "vexp/parallel.hpp"

namespace vexp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double normal_log_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

Index triangle_size(Index m) { return m * (m + 1) / 2; }

// Flat lower-triangle position -> whether it is on the diagonal, and the
// matching diagonal index or off-diagonal ordinal.
struct TriangleSlot {
  bool diagonal;
  Index index;
  Index row;
  Index col;
};

std::vector<TriangleSlot> triangle_slots(Index m) {
  std::vector<TriangleSlot> out;
  Index off = 0;
  for (Index c = 0; c < m; ++c) {
    for (Index r = c; r < m; ++r) out.push_back({r == c, r == c ? c : off++, r, c});
  }
  return out;
}

}  // namespace

void SsvsConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("ssvs: tau must be positive");
  if (!(c > 1.0)) throw std::invalid_argument("ssvs: c must exceed 1");
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("ssvs: pi must lie in (0, 1)");
}

void PriorConfig::validate() const {
  if (!(ig_a > 0.0) || !(ig_b > 0.0)) {
    throw std::invalid_argument("priors: inverse-gamma shape and scale must be positive");
  }
  if (!(sigma_v > 0.0)) throw std::invalid_argument("priors: sigma_v must be positive");
  if (delta0 && !delta0->allFinite()) throw std::invalid_argument("priors: delta0 not finite");
}

CepstralModel state_model(const SsvsState& state, Index m, Index q) {
  Vector params(param_count(m, q));
  params << state.omega0_entries, state.v;
  return to_model(params, m, q);
}

double ssvs_log_prior(double v, bool gamma, const SsvsConfig& cfg) {
  const double sd = gamma ? cfg.c * cfg.tau : cfg.tau;
  return normal_log_pdf(v, 0.0, sd * sd) + std::log(gamma ? cfg.pi : 1.0 - cfg.pi);
}

double inverse_gamma_log_pdf(double x, double a, double b) {
  if (!(x > 0.0)) return kNegInf;
  return a * std::log(b) - std::lgamma(a) - (a + 1.0) * std::log(x) - b / x;
}

double draw_inverse_gamma(double a, double b, std::mt19937_64& rng) {
  // 1/X with X ~ Gamma(shape a, rate b).
  std::gamma_distribution<double> g(a, 1.0 / b);
  return 1.0 / g(rng);
}

double log_prior(const SsvsState& s, const PriorConfig& priors, const SsvsConfig& cfg) {
  const Index m = s.delta.size();
  double lp = 0.0;
  auto coefficient = [&](double v, bool gamma) {
    return cfg.enabled ? ssvs_log_prior(v, gamma, cfg)
                       : normal_log_pdf(v, 0.0, priors.sigma_v * priors.sigma_v);
  };
  for (Index i = 0; i < s.v.size(); ++i) lp += coefficient(s.v[i], s.gamma[i] != 0);
  Index pos = 0;
  for (const auto& slot : triangle_slots(m)) {
    const double x = s.omega0_entries[pos++];
    if (slot.diagonal) {
      lp += normal_log_pdf(x, 0.0, s.var_omega0[slot.index]);
    } else {
      lp += coefficient(x, s.gamma_omega0[static_cast<std::size_t>(slot.index)] != 0);
    }
  }
  const Vector delta0 = priors.delta0.value_or(Vector::Zero(m));
  for (Index j = 0; j < m; ++j) {
    lp += normal_log_pdf(s.delta[j], delta0[j], s.var_mu[j]);
    lp += inverse_gamma_log_pdf(s.var_mu[j], priors.ig_a, priors.ig_b);
    lp += inverse_gamma_log_pdf(s.var_omega0[j], priors.ig_a, priors.ig_b);
  }
  return lp;
}

namespace {

double log_likelihood(const SsvsState& s, const DataPanel& data, Index q, Index M, bool whittle) {
  try {
    const CepstralModel model = state_model(s, data.dim(), q);
    const DataPanel y = data.centered(s.delta);
    if (whittle) {
      return -0.5 * static_cast<double>(data.length()) * whittle_deviance(model, y, M);
    }
    return -0.5 * gaussian_deviance(model, y, M);
  } catch (const NumericalError&) {
    return kNegInf;
  }
}

}  // namespace

double log_posterior(const SsvsState& state, const DataPanel& data, Index q,
                     const PriorConfig& priors, const SsvsConfig& cfg, Index M, bool whittle) {
  PriorConfig p = priors;
  if (!p.delta0) p.delta0 = data.sample_mean();
  if (M == 0) M = default_wold_truncation(q);
  const double ll = log_likelihood(state, data, q, M, whittle);
  if (ll == kNegInf) return kNegInf;
  return ll + log_prior(state, p, cfg);
}

DeltaConditional delta_full_conditional(const CepstralModel& model, const DataPanel& data,
                                        const Vector& delta0, const Vector& var_mu, Index M) {
  const Index m = data.dim();
  const Index T = data.length();
  if (M == 0) M = default_wold_truncation(model.order());
  std::vector<Matrix> panels;
  panels.push_back(data.values());
  for (Index j = 0; j < m; ++j) {
    Matrix e = Matrix::Zero(T, m);
    e.col(j).setOnes();
    panels.push_back(std::move(e));
  }
  const AcfSequence acf = acf_of_model(model, std::min(T - 1, M), M);
  const PredictionErrors pe = durbin_levinson(acf, panels);

  DeltaConditional out;
  out.log_det = pe.log_det;
  out.xx = pe.gram(0, 0);
  out.xa = pe.gram.row(0).tail(m).transpose();
  out.aa = pe.gram.bottomRightCorner(m, m);
  const Vector prior_precision = var_mu.cwiseInverse();
  Matrix precision = out.aa;
  precision.diagonal() += prior_precision;
  const Vector rhs = out.xa + prior_precision.cwiseProduct(delta0);
  const Eigen::LLT<Matrix> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("delta_full_conditional: precision is not positive definite");
  }
  out.covariance = llt.solve(Matrix::Identity(m, m));
  out.covariance = (0.5 * (out.covariance + out.covariance.transpose())).eval();
  out.mean = llt.solve(rhs);
  return out;
}

RwStep rw_metropolis_step(double x, double log_target, double scale,
                          const std::function<double(double)>& log_density,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double proposal = x + scale * normal(rng);
  const double lp = log_density(proposal);
  const double u = unif(rng);
  if (lp > kNegInf && std::log(u) < lp - log_target) return {proposal, lp, true};
  return {x, log_target, false};
}

Chain mcmc_run(const DataPanel& data, Index q, const PriorConfig& priors_in,
               const SsvsConfig& cfg, const McmcConfig& config) {
  if (cfg.enabled) cfg.validate();
  priors_in.validate();
  if (config.iterations <= 0 || config.burn_in < 0 || config.burn_in >= config.iterations) {
    throw std::invalid_argument("mcmc_run: need 0 <= burn_in < iterations");
  }
  if (q < 0) throw std::invalid_argument("mcmc_run: negative order");
  const Index m = data.dim();
  const Index T = data.length();
  if (T < 2) throw std::invalid_argument("mcmc_run: need at least two observations");
  const Index M = config.M > 0 ? config.M : default_wold_truncation(q);
  const Index p = q * m * m;
  const Index n0 = triangle_size(m);
  const Index K = p + n0;
  const auto slots = triangle_slots(m);

  Chain chain;
  chain.m = m;
  chain.q = q;
  chain.iterations = config.iterations;
  chain.burn_in = config.burn_in;
  chain.seed = config.seed;
  chain.ssvs = cfg;
  chain.priors = priors_in;
  if (!chain.priors.delta0) chain.priors.delta0 = data.sample_mean();
  const PriorConfig& priors = chain.priors;
  const Vector delta0 = *priors.delta0;
  if (delta0.size() != m) throw std::invalid_argument("mcmc_run: delta0 has wrong length");
  if (priors.ig_a <= 2.0) {
    chain.warnings.push_back("inverse-gamma shape <= 2: prior variance is infinite");
  }

  SsvsState s;
  if (config.initial) {
    s = *config.initial;
    if (s.v.size() != p || static_cast<Index>(s.gamma.size()) != p ||
        s.omega0_entries.size() != n0 ||
        static_cast<Index>(s.gamma_omega0.size()) != n0 - m || s.delta.size() != m ||
        s.var_mu.size() != m || s.var_omega0.size() != m) {
      throw std::invalid_argument("mcmc_run: initial state has wrong dimensions");
    }
  } else {
    s.v = Vector::Zero(p);
    s.gamma.assign(static_cast<std::size_t>(p), 1);
    const Matrix centered = data.centered(delta0).values();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(T);
    s.omega0_entries = to_vector(CepstralModel(symmetric_log(cov), {}));
    s.gamma_omega0.assign(static_cast<std::size_t>(n0 - m), 1);
    s.delta = delta0;
    s.var_mu = Vector::Ones(m);
    s.var_omega0 = Vector::Ones(m);
  }
  if (!cfg.enabled) {
    std::fill(s.gamma.begin(), s.gamma.end(), 1);
    std::fill(s.gamma_omega0.begin(), s.gamma_omega0.end(), 1);
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto likelihood = [&](const SsvsState& st) {
    return config.prior_only ? 0.0 : log_likelihood(st, data, q, M, config.whittle);
  };
  auto coefficient_prior = [&](double v, bool gamma) {
    return cfg.enabled ? ssvs_log_prior(v, gamma, cfg)
                       : normal_log_pdf(v, 0.0, priors.sigma_v * priors.sigma_v);
  };

  Vector scales = Vector::Constant(K, config.initial_scale);
  std::vector<long> window_prop(static_cast<std::size_t>(K), 0);
  std::vector<long> window_acc(static_cast<std::size_t>(K), 0);
  chain.proposed.assign(static_cast<std::size_t>(K), 0);
  chain.accepted.assign(static_cast<std::size_t>(K), 0);
  chain.draws.reserve(static_cast<std::size_t>(config.iterations));

  double ll = likelihood(s);
  if (ll == kNegInf) {
    throw NumericalError("mcmc_run: likelihood is not finite at the initial state");
  }

  for (long iter = 0; iter < config.iterations; ++iter) {
    const bool burning = iter < config.burn_in;
    auto record = [&](Index k, bool ok) {
      const auto kk = static_cast<std::size_t>(k);
      ++window_prop[kk];
      if (ok) ++window_acc[kk];
      if (!burning) {
        ++chain.proposed[kk];
        if (ok) ++chain.accepted[kk];
      }
    };

    // (a) cepstral coefficients: random walk on v_i with a joint gamma flip.
    for (Index i = 0; i < p; ++i) {
      const double old_v = s.v[i];
      const bool old_g = s.gamma[static_cast<std::size_t>(i)] != 0;
      const double new_v = old_v + scales[i] * normal(rng);
      const bool new_g = cfg.enabled && unif(rng) < 0.5 ? !old_g : old_g;
      s.v[i] = new_v;
      s.gamma[static_cast<std::size_t>(i)] = new_g;
      const double ll_new = likelihood(s);
      const double log_ratio =
          ll_new - ll + coefficient_prior(new_v, new_g) - coefficient_prior(old_v, old_g);
      const bool ok = ll_new > kNegInf && std::log(unif(rng)) < log_ratio;
      if (ok) {
        ll = ll_new;
      } else {
        s.v[i] = old_v;
        s.gamma[static_cast<std::size_t>(i)] = old_g;
      }
      record(i, ok);
    }

    // (b) Omega_0 entries; off-diagonals carry an inclusion indicator.
    for (Index e = 0; e < n0; ++e) {
      const TriangleSlot& slot = slots[static_cast<std::size_t>(e)];
      const double old_x = s.omega0_entries[e];
      const double new_x = old_x + scales[p + e] * normal(rng);
      double log_ratio = 0.0;
      bool old_g = true, new_g = true;
      if (slot.diagonal) {
        const double var = s.var_omega0[slot.index];
        log_ratio = normal_log_pdf(new_x, 0.0, var) - normal_log_pdf(old_x, 0.0, var);
      } else {
        old_g = s.gamma_omega0[static_cast<std::size_t>(slot.index)] != 0;
        new_g = cfg.enabled && unif(rng) < 0.5 ? !old_g : old_g;
        s.gamma_omega0[static_cast<std::size_t>(slot.index)] = new_g;
        log_ratio = coefficient_prior(new_x, new_g) - coefficient_prior(old_x, old_g);
      }
      s.omega0_entries[e] = new_x;
      const double ll_new = likelihood(s);
      log_ratio += ll_new - ll;
      const bool ok = ll_new > kNegInf && std::log(unif(rng)) < log_ratio;
      if (ok) {
        ll = ll_new;
      } else {
        s.omega0_entries[e] = old_x;
        if (!slot.diagonal) s.gamma_omega0[static_cast<std::size_t>(slot.index)] = old_g;
      }
      record(p + e, ok);
    }

    // (c) delta from its Gaussian full conditional.
    {
      Vector z(m);
      if (config.prior_only) {
        for (Index j = 0; j < m; ++j) {
          s.delta[j] = delta0[j] + std::sqrt(s.var_mu[j]) * normal(rng);
        }
      } else if (config.exact_delta && !config.whittle) {
        try {
          const auto dc =
              delta_full_conditional(state_model(s, m, q), data, delta0, s.var_mu, M);
          const Eigen::LLT<Matrix> chol(dc.covariance);
          for (Index j = 0; j < m; ++j) z[j] = normal(rng);
          s.delta = dc.mean + Matrix(chol.matrixL()) * z;
          ll = -0.5 * (dc.log_det + dc.xx - 2.0 * s.delta.dot(dc.xa) +
                       s.delta.dot(dc.aa * s.delta));
        } catch (const NumericalError&) {
          chain.warnings.push_back("delta update skipped at iteration " + std::to_string(iter));
        }
      } else {
        // Large-T approximation: X-bar ~ N(delta, f(0) / T).
        const CepstralModel model = state_model(s, m, q);
        const Matrix f0 = spectral_density(model, 0.0).value.real();
        Matrix precision = static_cast<double>(T) * f0.inverse();
        const Vector xbar = data.sample_mean();
        Vector rhs = precision * xbar;
        precision.diagonal() += s.var_mu.cwiseInverse();
        rhs += s.var_mu.cwiseInverse().cwiseProduct(delta0);
        const Eigen::LLT<Matrix> llt(precision);
        const Matrix cov = llt.solve(Matrix::Identity(m, m));
        const Eigen::LLT<Matrix> chol(0.5 * (cov + cov.transpose()));
        for (Index j = 0; j < m; ++j) z[j] = normal(rng);
        const SsvsState before = s;
        s.delta = llt.solve(rhs) + Matrix(chol.matrixL()) * z;
        const double ll_new = likelihood(s);
        if (ll_new > kNegInf) {
          ll = ll_new;
        } else {
          s = before;
        }
      }
    }

    // (d) variance hyperparameters: IG(A + 1/2, B + x^2 / 2).
    for (Index j = 0; j < m; ++j) {
      const double dm = s.delta[j] - delta0[j];
      s.var_mu[j] = draw_inverse_gamma(priors.ig_a + 0.5, priors.ig_b + 0.5 * dm * dm, rng);
    }
    for (Index j = 0; j < m; ++j) {
      Index pos = 0;
      for (const auto& slot : slots) {
        if (slot.diagonal && slot.index == j) break;
        ++pos;
      }
      const double x = s.omega0_entries[pos];
      s.var_omega0[j] = draw_inverse_gamma(priors.ig_a + 0.5, priors.ig_b + 0.5 * x * x, rng);
    }

    chain.draws.push_back(s);

    if (burning && (iter + 1) % config.adapt_window == 0) {
      for (Index k = 0; k < K; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        if (window_prop[kk] == 0) continue;
        const double rate = static_cast<double>(window_acc[kk]) / window_prop[kk];
        if (rate < config.target_low) scales[k] *= 0.7;
        if (rate > config.target_high) scales[k] *= 1.4;
        window_prop[kk] = 0;
        window_acc[kk] = 0;
      }
    }
    if (config.progress && config.progress_every > 0 && (iter + 1) % config.progress_every == 0) {
      config.progress(iter + 1);
    }
  }
  chain.proposal_scales = scales;

  for (Index k = 0; k < K; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (chain.proposed[kk] == 0) continue;
    const double rate = static_cast<double>(chain.accepted[kk]) / chain.proposed[kk];
    if (rate < 0.05 || rate > 0.8) {
      chain.warnings.push_back("coordinate " + std::to_string(k) + " acceptance rate " +
                               std::to_string(rate) + " after burn-in");
    }
  }
  if (!config.prior_only) {
    const CepstralModel last = state_model(s, m, q);
    if (truncation_ratio(last, M) > 1e-6) {
      chain.warnings.push_back("Wold truncation M = " + std::to_string(M) +
                               " may be inadequate at the final state");
    }
  }
  for (const auto& w : chain.warnings) warn("mcmc_run: " + w);
  return chain;
}

std::string InclusionSummary::modal_pattern(Index k) const {
  const auto& counts = patterns.at(static_cast<std::size_t>(k - 1));
  std::string best;
  long best_count = -1;
  for (const auto& [pattern, count] : counts) {
    if (count > best_count) {
      best = pattern;
      best_count = count;
    }
  }
  return best;
}

InclusionSummary inclusion_frequencies(const Chain& chain) {
  if (chain.retained() <= 0) throw std::invalid_argument("inclusion_frequencies: empty chain");
  const Index m = chain.m;
  const Index mm = m * m;
  const Index p = chain.q * mm;
  const Index noff = triangle_size(m) - m;
  InclusionSummary out;
  out.retained = chain.retained();
  out.v_rates = Vector::Zero(p);
  out.omega0_rates = Vector::Zero(noff);
  out.patterns.resize(static_cast<std::size_t>(chain.q));
  for (auto it = chain.draws.begin() + chain.burn_in; it != chain.draws.end(); ++it) {
    for (Index i = 0; i < p; ++i) out.v_rates[i] += it->gamma[static_cast<std::size_t>(i)];
    for (Index i = 0; i < noff; ++i) {
      out.omega0_rates[i] += it->gamma_omega0[static_cast<std::size_t>(i)];
    }
    for (Index k = 0; k < chain.q; ++k) {
      std::string pattern(static_cast<std::size_t>(mm), '0');
      for (Index i = 0; i < mm; ++i) {
        if (it->gamma[static_cast<std::size_t>(k * mm + i)]) {
          pattern[static_cast<std::size_t>(i)] = '1';
        }
      }
      ++out.patterns[static_cast<std::size_t>(k)][pattern];
    }
  }
  out.v_rates /= static_cast<double>(out.retained);
  out.omega0_rates /= static_cast<double>(out.retained);
  return out;
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("sample_quantile: no values");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<ParameterSummary> posterior_summary(const Chain& chain,
                                                const std::vector<double>& probs) {
  if (chain.retained() <= 0) throw std::invalid_argument("posterior_summary: empty chain");
  const Index m = chain.m;
  std::vector<std::string> names;
  std::vector<std::function<double(const SsvsState&)>> getters;
  for (Index j = 0; j < m; ++j) {
    names.push_back("mu_" + std::to_string(j + 1));
    getters.push_back([j](const SsvsState& s) { return s.delta[j]; });
  }
  Index pos = 0;
  for (const auto& slot : triangle_slots(m)) {
    names.push_back("Omega0(" + std::to_string(slot.row + 1) + "," +
                    std::to_string(slot.col + 1) + ")");
    getters.push_back([pos](const SsvsState& s) { return s.omega0_entries[pos]; });
    ++pos;
  }
  for (Index k = 0; k < chain.q; ++k) {
    for (Index c = 0; c < m; ++c) {
      for (Index r = 0; r < m; ++r) {
        const Index i = k * m * m + c * m + r;
        names.push_back("Omega" + std::to_string(k + 1) + "(" + std::to_string(r + 1) + "," +
                        std::to_string(c + 1) + ")");
        getters.push_back([i](const SsvsState& s) { return s.v[i]; });
      }
    }
  }
  for (Index j = 0; j < m; ++j) {
    names.push_back("sigma2_mu_" + std::to_string(j + 1));
    getters.push_back([j](const SsvsState& s) { return s.var_mu[j]; });
  }
  for (Index j = 0; j < m; ++j) {
    names.push_back("sigma2_" + std::to_string(j + 1));
    getters.push_back([j](const SsvsState& s) { return s.var_omega0[j]; });
  }

  std::vector<ParameterSummary> out;
  const auto first = chain.draws.begin() + chain.burn_in;
  const double n = static_cast<double>(chain.retained());
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(chain.retained()));
    for (auto it = first; it != chain.draws.end(); ++it) values.push_back(getters[k](*it));
    ParameterSummary row;
    row.name = names[k];
    double sum = 0.0;
    for (double v : values) sum += v;
    row.mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - row.mean) * (v - row.mean);
    row.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    for (double p : probs) row.quantiles.push_back(sample_quantile(values, p));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<CepstralModel> retained_models(const Chain& chain, long thin) {
  if (thin < 1) throw std::invalid_argument("retained_models: thin must be >= 1");
  std::vector<CepstralModel> out;
  for (long i = chain.burn_in; i < static_cast<long>(chain.draws.size()); i += thin) {
    out.push_back(state_model(chain.draws[static_cast<std::size_t>(i)], chain.m, chain.q));
  }
  return out;
}

std::vector<Vector> retained_deltas(const Chain& chain, long thin) {
  if (thin < 1) throw std::invalid_argument("retained_deltas: thin must be >= 1");
  std::vector<Vector> out;
  for (long i = chain.burn_in; i < static_cast<long>(chain.draws.size()); i += thin) {
    out.push_back(chain.draws[static_cast<std::size_t>(i)].delta);
  }
  return out;
}

CoherenceBand posterior_coherence(const Chain& chain, const std::vector<double>& lambdas,
                                  Index i, Index j, double coverage, long thin, Exec exec) {
  if (chain.retained() <= 0) throw std::invalid_argument("posterior_coherence: empty chain");
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("posterior_coherence: coverage must lie in (0, 1)");
  }
  const auto models = retained_models(chain, thin);
  const std::size_t D = models.size();
  const std::size_t L = lambdas.size();
  std::vector<std::vector<double>> values(D);
  parallel_for(static_cast<long>(D), exec, [&](long d) {
    const auto s = static_cast<std::size_t>(d);
    values[s] = coherence_grid(models[s], lambdas, i, j, Exec::serial);
  });
  CoherenceBand out;
  out.lambda = lambdas;
  out.mean.assign(L, 0.0);
  out.lower.assign(L, 0.0);
  out.upper.assign(L, 0.0);
  parallel_for(static_cast<long>(L), exec, [&](long l) {
    const auto k = static_cast<std::size_t>(l);
    std::vector<double> column(D);
    double sum = 0.0;
    for (std::size_t d = 0; d < D; ++d) {
      column[d] = values[d][k];
      sum += column[d];
    }
    out.mean[k] = sum / static_cast<double>(D);
    out.lower[k] = sample_quantile(column, 0.5 - 0.5 * coverage);
    out.upper[k] = sample_quantile(column, 0.5 + 0.5 * coverage);
  });
  return out;
}

}  // namespace vexp
