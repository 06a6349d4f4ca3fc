#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vexp/cepstral.hpp"
#include "vexp/likelihood.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// Spike-and-slab prior v | gamma ~ (1 - gamma) N(0, tau^2) + gamma N(0, c^2 tau^2),
/// gamma ~ Bernoulli(pi).
struct SsvsConfig {
  double tau = 0.1;
  double c = 10.0;
  double pi = 0.5;
  bool enabled = true;

  void validate() const;
};

struct PriorConfig {
  /// Prior mean of delta; the sample mean when unset.
  std::optional<Vector> delta0;
  /// Inverse-gamma shape and scale for the delta and Omega_0-diagonal variances.
  double ig_a = 2.1;
  double ig_b = 1.1;
  /// Prior SD of cepstral coefficients when SSVS is disabled.
  double sigma_v = 10.0;

  void validate() const;
};

struct SsvsState {
  Vector v;                            // vec(Omega_1), ..., vec(Omega_q)
  std::vector<std::uint8_t> gamma;     // one per entry of v
  Vector omega0_entries;               // lower triangle of Omega_0 by columns
  std::vector<std::uint8_t> gamma_omega0;  // one per off-diagonal Omega_0 entry
  Vector delta;
  Vector var_mu;      // prior variances of delta
  Vector var_omega0;  // prior variances of the Omega_0 diagonal

  friend bool operator==(const SsvsState&, const SsvsState&) = default;
};

CepstralModel state_model(const SsvsState& state, Index m, Index q);

/// Log density of v under its mixture component plus log P(gamma).
double ssvs_log_prior(double v, bool gamma, const SsvsConfig& cfg);

/// Log of the inverse-gamma density with shape a and scale b.
double inverse_gamma_log_pdf(double x, double a, double b);
double draw_inverse_gamma(double a, double b, std::mt19937_64& rng);

struct McmcConfig {
  long iterations = 60000;
  long burn_in = 40000;
  std::uint64_t seed = 1;
  Index M = 0;  // 0: default_wold_truncation(q)
  /// Replace the Gaussian deviance by T times the per-observation Whittle
  /// deviance.
  bool whittle = false;
  /// Exact Gaussian full conditional for delta; otherwise a large-T
  /// approximation with precision T f(0)^{-1}.
  bool exact_delta = true;
  /// Drop the likelihood (samples the prior).
  bool prior_only = false;
  double initial_scale = 0.1;
  long adapt_window = 50;
  double target_low = 0.20;
  double target_high = 0.45;
  /// Optional starting point; defaults to v = 0, gamma = 1, Omega_0 = log
  /// sample covariance, delta = delta0, variances = 1.
  std::optional<SsvsState> initial;
  /// Called with the iteration count every `progress_every` sweeps (0: never).
  std::function<void(long)> progress;
  long progress_every = 0;
};

struct Chain {
  Index m = 0;
  Index q = 0;
  long iterations = 0;
  long burn_in = 0;
  std::uint64_t seed = 0;
  SsvsConfig ssvs;
  PriorConfig priors;  // with delta0 filled in
  std::vector<SsvsState> draws;  // one per iteration, burn-in included
  /// Per-coordinate counts, v entries first, then Omega_0 entries.
  std::vector<long> proposed;
  std::vector<long> accepted;
  /// Random-walk scales frozen at the end of burn-in.
  Vector proposal_scales;
  std::vector<std::string> warnings;

  long retained() const { return static_cast<long>(draws.size()) - burn_in; }
};

/// -D/2 for the state plus every log prior term. NumericalError inside the
/// likelihood maps to -infinity.
double log_posterior(const SsvsState& state, const DataPanel& data, Index q,
                     const PriorConfig& priors, const SsvsConfig& cfg, Index M = 0,
                     bool whittle = false);

/// Log prior of a state (all blocks).
double log_prior(const SsvsState& state, const PriorConfig& priors, const SsvsConfig& cfg);

/// Gaussian full conditional of delta given the model and prior
/// N(delta0, diag(var_mu)).
struct DeltaConditional {
  Vector mean;
  Matrix covariance;
  /// Pieces of the deviance as a function of delta:
  /// D(delta) = log_det + xx - 2 delta' xa + delta' aa delta.
  double log_det = 0.0;
  double xx = 0.0;
  Vector xa;
  Matrix aa;
};
DeltaConditional delta_full_conditional(const CepstralModel& model, const DataPanel& data,
                                        const Vector& delta0, const Vector& var_mu, Index M = 0);

/// Result of one random-walk Metropolis step on a scalar.
struct RwStep {
  double value;
  double log_target;
  bool accepted;
};
RwStep rw_metropolis_step(double x, double log_target, double scale,
                          const std::function<double(double)>& log_density,
                          std::mt19937_64& rng);

Chain mcmc_run(const DataPanel& data, Index q, const PriorConfig& priors, const SsvsConfig& cfg,
               const McmcConfig& config = {});

struct InclusionSummary {
  /// Inclusion rate of each v entry, and of each off-diagonal Omega_0 entry.
  Vector v_rates;
  Vector omega0_rates;
  /// Per cepstral matrix Omega_1..Omega_q: pattern string (column-major 0/1)
  /// -> count over retained draws.
  std::vector<std::map<std::string, long>> patterns;
  long retained = 0;

  /// Most frequent pattern for Omega_k (1-based); ties go to the
  /// lexicographically smaller string.
  std::string modal_pattern(Index k) const;
};
InclusionSummary inclusion_frequencies(const Chain& chain);

struct ParameterSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  std::vector<double> quantiles;
};
/// Rows: mu_j, Omega0(r,c) (lower triangle), OmegaK(r,c) column-major,
/// sigma2_mu_j, sigma2_j; indices are 1-based. Quantiles are type 7.
std::vector<ParameterSummary> posterior_summary(const Chain& chain,
                                                const std::vector<double>& probs = {0.025, 0.5,
                                                                                    0.975});

/// Type-7 sample quantile of unsorted values.
double sample_quantile(std::vector<double> values, double p);

/// Models and deltas of the retained draws, every `thin`-th one.
std::vector<CepstralModel> retained_models(const Chain& chain, long thin = 1);
std::vector<Vector> retained_deltas(const Chain& chain, long thin = 1);

struct CoherenceBand {
  std::vector<double> lambda;
  std::vector<double> mean;
  std::vector<double> lower;
  std::vector<double> upper;
};
/// Pointwise posterior mean and central `coverage` band of the squared
/// coherence between components i and j over the retained draws.
CoherenceBand posterior_coherence(const Chain& chain, const std::vector<double>& lambdas,
                                  Index i = 0, Index j = 1, double coverage = 0.95,
                                  long thin = 1, Exec exec = Exec::parallel);

}  // namespace vexp
