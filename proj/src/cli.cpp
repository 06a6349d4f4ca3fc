#include "vexp/cli.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vexp/bayes.hpp"
#include "vexp/covariance.hpp"
#include "vexp/forecast.hpp"
#include "vexp/io.hpp"
#include "vexp/mle.hpp"

namespace vexp {

using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by several commands. Every command reads only what it
// registered.
struct Settings {
  std::string model, data, chain, nested, nesting;
  std::optional<std::string> out;
  Index T = 0, q = 0, M = 0, burn = 0, difference = 0, h = 12, grid = 256, holdout = 12;
  Index i = 1, j = 2;
  std::uint64_t seed = 1;
  std::string names;
  std::string objective = "gaussian";
  int max_iter = 500;
  double grad_tol = 1e-6;
  double sparsify = 0.0;
  bool serial = false;
  long iterations = 60000, burn_in = 40000, thin = 1;
  double tau = 0.1, c = 10.0, pi = 0.5, ig_a = 2.1, ig_b = 1.1, sigma_v = 10.0;
  bool no_ssvs = false, whittle = false, approx_delta = false;
  double coverage = 0.95;
  int df = 0;
};

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

json effective_config(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames()[0];
    if (name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      if (opt->get_expected_min() == 0) {
        cfg[name] = true;
      } else {
        cfg[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
      }
    } else {
      const std::string def = opt->get_default_str();
      cfg[name] = def.empty() ? json(nullptr) : json(def);
    }
  }
  return cfg;
}

void write_metadata(const std::filesystem::path& primary, const CLI::App& sub,
                    std::optional<std::uint64_t> seed, const std::vector<std::string>& outputs) {
  json meta = {{"command", sub.get_name()},
               {"version", kVersion},
               {"seed", seed ? json(*seed) : json(nullptr)},
               {"config", effective_config(sub)},
               {"outputs", outputs},
               {"timestamp", now_utc()}};
  write_text(std::filesystem::path(primary.string() + ".meta.json"), meta.dump(2) + "\n");
}

// Appends config-file entries for flags that are absent from the command
// line, so explicit flags always win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  std::set<std::string> given;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(name);
    if (name == "config") {
      if (eq != std::string::npos) {
        path = a.substr(eq + 1);
      } else if (k + 1 < args.size()) {
        path = args[k + 1];
      }
    }
  }
  std::vector<std::string> merged = args;
  if (!path) return merged;
  json cfg;
  try {
    cfg = json::parse(read_text(*path));
  } catch (const json::parse_error& e) {
    throw IoError(*path + ": invalid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw IoError(*path + ": config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    for (char& ch : name) {
      if (ch == '_') ch = '-';
    }
    if (name == "config" || given.count(name)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) merged.push_back("--" + name);
    } else if (value.is_number()) {
      merged.push_back("--" + name);
      merged.push_back(value.dump());
    } else if (value.is_string()) {
      merged.push_back("--" + name);
      merged.push_back(value.get<std::string>());
    } else if (!value.is_null()) {
      throw UsageError("config key '" + key + "' must be a scalar");
    }
  }
  return merged;
}

DataPanel load_data(const Settings& s) {
  DataPanel data = load_csv(s.data);
  if (s.difference > 0) data = seasonal_difference(data, s.difference);
  return data;
}

std::vector<std::string> split_names(const std::string& names) {
  std::vector<std::string> out;
  std::stringstream ss(names);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

Exec exec_of(const Settings& s) { return s.serial ? Exec::serial : Exec::parallel; }

void check_coverage(double coverage) {
  if (!(coverage > 0.0 && coverage < 1.0)) {
    throw std::invalid_argument("coverage must lie in (0, 1)");
  }
}

int cmd_simulate(const Settings& s, const CLI::App& sub, std::ostream& out) {
  if (s.T < 1) throw std::invalid_argument("T must be positive");
  const ModelFile mf = load_model(s.model);
  DataPanel data = simulate(mf.model, mf.delta, s.T, s.seed, s.M, s.burn);
  if (!s.names.empty()) data = DataPanel(data.values(), split_names(s.names));
  const auto path = output_path(s.out, "simulated.csv");
  write_csv(path, data);
  write_metadata(path, sub, s.seed, {path.string()});
  out << "wrote " << path.string() << " (" << data.length() << " x " << data.dim() << ")\n";
  return kExitOk;
}

MleConfig mle_config(const Settings& s) {
  if (s.max_iter < 1) throw std::invalid_argument("max-iter must be positive");
  if (!(s.grad_tol > 0.0)) throw std::invalid_argument("grad-tol must be positive");
  if (s.sparsify < 0.0) throw std::invalid_argument("sparsify must be non-negative");
  MleConfig cfg;
  cfg.M = s.M;
  cfg.max_iter = s.max_iter;
  cfg.grad_tol = s.grad_tol;
  cfg.exec = exec_of(s);
  return cfg;
}

int cmd_fit_mle(const Settings& s, const CLI::App& sub, std::ostream& out) {
  const ObjectiveKind kind = parse_objective_kind(s.objective);
  const MleConfig cfg = mle_config(s);
  const DataPanel data = load_data(s);
  FitResult fit = fit_mle(data, s.q, kind, cfg);
  if (s.sparsify > 0.0) fit = sparsify_refit(data, fit, s.sparsify, cfg);
  const auto path = output_path(s.out, "fit.json");
  save_fit(path, fit);
  write_metadata(path, sub, std::nullopt, {path.string()});
  out << "objective " << format_double(fit.objective_value) << ", "
      << (fit.converged ? "converged" : "not converged") << " after " << fit.iterations
      << " iterations; wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_fit_bayes(const Settings& s, const CLI::App& sub, std::ostream& out) {
  SsvsConfig ssvs{s.tau, s.c, s.pi, !s.no_ssvs};
  if (ssvs.enabled) ssvs.validate();
  PriorConfig priors;
  priors.ig_a = s.ig_a;
  priors.ig_b = s.ig_b;
  priors.sigma_v = s.sigma_v;
  priors.validate();
  if (s.iterations < 1 || s.burn_in < 0 || s.burn_in >= s.iterations) {
    throw std::invalid_argument("need 0 <= burn-in < iterations");
  }
  if (s.q < 0) throw std::invalid_argument("q must be non-negative");
  McmcConfig mc;
  mc.iterations = s.iterations;
  mc.burn_in = s.burn_in;
  mc.seed = s.seed;
  mc.M = s.M;
  mc.whittle = s.whittle;
  mc.exact_delta = !s.approx_delta;
  const DataPanel data = load_data(s);

  const Chain chain = mcmc_run(data, s.q, priors, ssvs, mc);
  const auto path = output_path(s.out, "chain.ndjson");
  save_chain(path, chain);

  json summary = {{"retained", chain.retained()}, {"parameters", json::array()}};
  for (const auto& row : posterior_summary(chain)) {
    summary["parameters"].push_back({{"name", row.name},
                                     {"mean", row.mean},
                                     {"sd", row.sd},
                                     {"q025", row.quantiles[0]},
                                     {"q50", row.quantiles[1]},
                                     {"q975", row.quantiles[2]}});
  }
  if (ssvs.enabled) {
    const auto inc = inclusion_frequencies(chain);
    json patterns = json::array();
    for (Index k = 1; k <= chain.q; ++k) {
      const std::string modal = inc.modal_pattern(k);
      patterns.push_back({{"matrix", k},
                          {"modal_pattern", modal},
                          {"count", inc.patterns[static_cast<std::size_t>(k - 1)].at(modal)}});
    }
    summary["inclusion"] = {
        {"v_rates", std::vector<double>(inc.v_rates.data(), inc.v_rates.data() + inc.v_rates.size())},
        {"omega0_rates", std::vector<double>(inc.omega0_rates.data(),
                                             inc.omega0_rates.data() + inc.omega0_rates.size())},
        {"modal", patterns}};
  }
  summary["warnings"] = chain.warnings;
  const std::filesystem::path summary_path = path.string() + ".summary.json";
  write_text(summary_path, summary.dump(2) + "\n");
  write_metadata(path, sub, s.seed, {path.string(), summary_path.string()});
  out << "wrote " << path.string() << " (" << chain.draws.size() << " draws) and "
      << summary_path.string() << "\n";
  return kExitOk;
}

Chain load_chain_checked(const Settings& s, Index m) {
  if (s.thin < 1) throw std::invalid_argument("thin must be >= 1");
  Chain chain = load_chain(s.chain);
  if (chain.m != m) throw std::invalid_argument("chain dimension does not match the data");
  if (chain.retained() < 1) throw std::invalid_argument("chain has no retained draws");
  return chain;
}

int cmd_forecast(const Settings& s, const CLI::App& sub, std::ostream& out) {
  if (s.h < 1) throw std::invalid_argument("h must be positive");
  check_coverage(s.coverage);
  if (s.model.empty() == s.chain.empty()) {
    throw UsageError("forecast needs exactly one of --model and --chain");
  }
  const DataPanel data = load_data(s);
  ForecastResult fc;
  if (!s.model.empty()) {
    const ModelFile mf = load_model(s.model);
    if (mf.model.dim() != data.dim()) {
      throw std::invalid_argument("model dimension does not match the data");
    }
    fc = forecast(data, mf.model, mf.delta, s.h, s.coverage, s.M);
  } else {
    const Chain chain = load_chain_checked(s, data.dim());
    const auto models = retained_models(chain, s.thin);
    const auto deltas = retained_deltas(chain, s.thin);
    fc = posterior_predictive_forecast(data, models, deltas, s.h, s.coverage, s.M, exec_of(s));
  }
  const Index m = data.dim();
  std::vector<std::string> header{"horizon"};
  Matrix rows(s.h, 1 + 3 * m);
  for (Index k = 0; k < m; ++k) {
    const std::string& name = data.names()[static_cast<std::size_t>(k)];
    header.insert(header.end(), {name, name + "_lower", name + "_upper"});
  }
  for (Index t = 0; t < s.h; ++t) {
    rows(t, 0) = static_cast<double>(t + 1);
    for (Index k = 0; k < m; ++k) {
      rows(t, 1 + 3 * k) = fc.point(t, k);
      rows(t, 2 + 3 * k) = fc.lower(t, k);
      rows(t, 3 + 3 * k) = fc.upper(t, k);
    }
  }
  const auto path = output_path(s.out, "forecast.csv");
  write_table(path, header, rows);
  write_metadata(path, sub, std::nullopt, {path.string()});
  out << "wrote " << path.string() << " (" << s.h << " horizons)\n";
  return kExitOk;
}

int cmd_spectrum(const Settings& s, const CLI::App& sub, std::ostream& out) {
  if (s.grid < 1) throw std::invalid_argument("grid must be positive");
  const ModelFile mf = load_model(s.model);
  const Index m = mf.model.dim();
  const auto lambdas = frequency_grid(s.grid);
  const auto spec = spectral_grid(mf.model, lambdas, exec_of(s));
  std::vector<std::string> header{"lambda"};
  for (Index c = 0; c < m; ++c) {
    for (Index r = c; r < m; ++r) {
      const std::string tag = "f" + std::to_string(r + 1) + "_" + std::to_string(c + 1);
      if (r == c) {
        header.push_back(tag);
      } else {
        header.push_back(tag + "_re");
        header.push_back(tag + "_im");
      }
    }
  }
  Matrix rows(s.grid, static_cast<Index>(header.size()));
  for (Index g = 0; g < s.grid; ++g) {
    const CMatrix& f = spec[static_cast<std::size_t>(g)].value;
    Index col = 0;
    rows(g, col++) = lambdas[static_cast<std::size_t>(g)];
    for (Index c = 0; c < m; ++c) {
      for (Index r = c; r < m; ++r) {
        rows(g, col++) = f(r, c).real();
        if (r != c) rows(g, col++) = f(r, c).imag();
      }
    }
  }
  const auto path = output_path(s.out, "spectrum.csv");
  write_table(path, header, rows);
  write_metadata(path, sub, std::nullopt, {path.string()});
  out << "wrote " << path.string() << " (" << s.grid << " frequencies)\n";
  return kExitOk;
}

int cmd_coherence(const Settings& s, const CLI::App& sub, std::ostream& out) {
  if (s.grid < 1) throw std::invalid_argument("grid must be positive");
  check_coverage(s.coverage);
  if (s.model.empty() == s.chain.empty()) {
    throw UsageError("coherence needs exactly one of --model and --chain");
  }
  const Index i = s.i - 1, j = s.j - 1;
  const auto lambdas = frequency_grid(s.grid);
  Matrix rows(s.grid, 4);
  auto check_components = [&](Index m) {
    if (i < 0 || j < 0 || i >= m || j >= m || i == j) {
      throw std::invalid_argument("i and j must be distinct components in 1.." +
                                  std::to_string(m));
    }
  };
  if (!s.model.empty()) {
    const ModelFile mf = load_model(s.model);
    check_components(mf.model.dim());
    const auto rho = coherence_grid(mf.model, lambdas, i, j, exec_of(s));
    for (Index g = 0; g < s.grid; ++g) {
      const auto k = static_cast<std::size_t>(g);
      rows.row(g) << lambdas[k], rho[k], rho[k], rho[k];
    }
  } else {
    if (s.thin < 1) throw std::invalid_argument("thin must be >= 1");
    const Chain chain = load_chain(s.chain);
    check_components(chain.m);
    const auto band = posterior_coherence(chain, lambdas, i, j, s.coverage, s.thin, exec_of(s));
    for (Index g = 0; g < s.grid; ++g) {
      const auto k = static_cast<std::size_t>(g);
      rows.row(g) << lambdas[k], band.mean[k], band.lower[k], band.upper[k];
    }
  }
  const auto path = output_path(s.out, "coherence.csv");
  write_table(path, {"lambda", "rho2", "lower", "upper"}, rows);
  write_metadata(path, sub, std::nullopt, {path.string()});
  out << "wrote " << path.string() << " (" << s.grid << " frequencies)\n";
  return kExitOk;
}

Index free_parameters(const FitResult& fit) {
  Index n = fit.estimate.size();
  for (bool held : fit.zero_mask) n -= held;
  return n;
}

int cmd_glr(const Settings& s, const CLI::App& sub, std::ostream& out) {
  const FitResult small = load_fit(s.nested);
  const FitResult big = load_fit(s.nesting);
  if (small.kind != big.kind) throw std::invalid_argument("fits use different objectives");
  if (small.T != big.T) throw std::invalid_argument("fits use different sample sizes");
  if (small.model.dim() != big.model.dim()) {
    throw std::invalid_argument("fits have different dimensions");
  }
  const int df =
      s.df > 0 ? s.df : static_cast<int>(free_parameters(big) - free_parameters(small));
  if (df <= 0) throw std::invalid_argument("the nesting fit must have more free parameters");
  const GlrResult r = glr_test(small.objective_value, big.objective_value, df, big.T);
  const json result = {{"statistic", r.statistic},
                       {"df", r.df},
                       {"p_value", r.p_value},
                       {"objective", to_string(big.kind)},
                       {"T", big.T}};
  const auto path = output_path(s.out, "glr.json");
  write_text(path, result.dump(2) + "\n");
  write_metadata(path, sub, std::nullopt, {path.string()});
  out << "statistic " << format_double(r.statistic) << ", df " << r.df << ", p-value "
      << format_double(r.p_value) << "\n";
  return kExitOk;
}

int cmd_forecast_benchmark(const Settings& s, const CLI::App& sub, std::ostream& out) {
  const ObjectiveKind kind = parse_objective_kind(s.objective);
  MleConfig cfg = mle_config(s);
  cfg.std_errors = false;
  if (s.holdout < 1) throw std::invalid_argument("holdout must be positive");
  const DataPanel data = load_data(s);
  const auto cmp = holdout_comparison(data, s.q, s.holdout, kind, cfg);
  auto to_vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  const json result = {{"series", data.names()},
                       {"holdout", s.holdout},
                       {"q", s.q},
                       {"objective", to_string(kind)},
                       {"mspe_vexp", to_vec(cmp.mspe_vexp)},
                       {"mspe_var1", to_vec(cmp.mspe_var1)},
                       {"total_vexp", cmp.mspe_vexp.sum()},
                       {"total_var1", cmp.mspe_var1.sum()}};
  const auto path = output_path(s.out, "benchmark.json");
  write_text(path, result.dump(2) + "\n");

  const Index m = data.dim();
  std::vector<std::string> header{"horizon"};
  Matrix rows(s.holdout, 1 + 3 * m);
  for (Index k = 0; k < m; ++k) {
    const std::string& name = data.names()[static_cast<std::size_t>(k)];
    header.insert(header.end(), {name, name + "_vexp", name + "_var1"});
  }
  for (Index t = 0; t < s.holdout; ++t) {
    rows(t, 0) = static_cast<double>(t + 1);
    for (Index k = 0; k < m; ++k) {
      rows(t, 1 + 3 * k) = cmp.actual(t, k);
      rows(t, 2 + 3 * k) = cmp.vexp(t, k);
      rows(t, 3 + 3 * k) = cmp.var1(t, k);
    }
  }
  const std::filesystem::path table = path.string() + ".forecasts.csv";
  write_table(table, header, rows);
  write_metadata(path, sub, std::nullopt, {path.string(), table.string()});
  out << "total MSPE: VEXP " << format_double(cmp.mspe_vexp.sum()) << ", VAR(1) "
      << format_double(cmp.mspe_var1.sum()) << "\n";
  return kExitOk;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  err << json{{"error", kind}, {"message", flat}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Cepstral (VEXP) models for multivariate time series", "vexp"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", "JSON file of option values; command-line flags take precedence");
    sub->add_option("--out", s.out, "Output file (default: inside $VEXP_OUTPUT_DIR)");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", s.data, "CSV panel with a header row")->required();
    sub->add_option("--difference", s.difference, "Seasonal difference lag applied first (0: none)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_truncation = [&](CLI::App* sub) {
    sub->add_option("--M", s.M, "Wold truncation (0: q + 25)")->check(CLI::NonNegativeNumber);
  };
  auto add_serial = [&](CLI::App* sub) {
    sub->add_flag("--serial", s.serial, "Use the serial reference kernels");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate a panel from a model file");
  add_common(sim);
  sim->add_option("--model", s.model, "Model JSON")->required();
  sim->add_option("--T", s.T, "Series length")->required()->check(CLI::PositiveNumber);
  sim->add_option("--seed", s.seed, "Random seed");
  sim->add_option("--burn", s.burn, "Discarded leading values")->check(CLI::NonNegativeNumber);
  sim->add_option("--names", s.names, "Comma-separated column names");
  add_truncation(sim);

  auto* mle = app.add_subcommand("fit-mle", "Maximum likelihood fit");
  add_common(mle);
  add_data(mle);
  mle->add_option("--q", s.q, "Cepstral order")->required()->check(CLI::NonNegativeNumber);
  mle->add_option("--objective", s.objective, "gaussian, whittle or approx-whittle");
  mle->add_option("--max-iter", s.max_iter, "BFGS iteration limit");
  mle->add_option("--grad-tol", s.grad_tol, "Gradient sup-norm tolerance");
  mle->add_option("--sparsify", s.sparsify, "Refit with |estimate| < z * SE held at zero (0: off)");
  add_truncation(mle);
  add_serial(mle);

  auto* bayes = app.add_subcommand("fit-bayes", "MCMC fit with optional SSVS prior");
  add_common(bayes);
  add_data(bayes);
  bayes->add_option("--q", s.q, "Cepstral order")->required()->check(CLI::NonNegativeNumber);
  bayes->add_option("--iterations", s.iterations, "Total sweeps");
  bayes->add_option("--burn-in", s.burn_in, "Discarded sweeps");
  bayes->add_option("--seed", s.seed, "Random seed");
  bayes->add_option("--tau", s.tau, "Spike standard deviation");
  bayes->add_option("--c", s.c, "Slab to spike ratio");
  bayes->add_option("--pi", s.pi, "Prior inclusion probability");
  bayes->add_flag("--no-ssvs", s.no_ssvs, "Normal prior with SD sigma-v instead of SSVS");
  bayes->add_option("--ig-a", s.ig_a, "Inverse-gamma shape for variance hyperparameters");
  bayes->add_option("--ig-b", s.ig_b, "Inverse-gamma scale for variance hyperparameters");
  bayes->add_option("--sigma-v", s.sigma_v, "Prior SD of coefficients without SSVS");
  bayes->add_flag("--whittle", s.whittle, "Use the Whittle likelihood");
  bayes->add_flag("--approx-delta", s.approx_delta, "Large-sample update for the mean");
  add_truncation(bayes);

  auto* fc = app.add_subcommand("forecast", "Multi-step forecasts with intervals");
  fc->set_help_flag("--help", "Print this help message and exit");
  add_common(fc);
  add_data(fc);
  fc->add_option("--model", s.model, "Model or fit JSON (plug-in intervals)");
  fc->add_option("--chain", s.chain, "Chain file (posterior predictive intervals)");
  fc->add_option("--h", s.h, "Forecast horizon")->check(CLI::PositiveNumber);
  fc->add_option("--coverage", s.coverage, "Interval coverage");
  fc->add_option("--thin", s.thin, "Use every thin-th retained draw");
  add_truncation(fc);
  add_serial(fc);

  auto* spec = app.add_subcommand("spectrum", "Spectral density matrix on a frequency grid");
  add_common(spec);
  spec->add_option("--model", s.model, "Model or fit JSON")->required();
  spec->add_option("--grid", s.grid, "Number of frequencies pi k / n, k = 1..n");
  add_serial(spec);

  auto* coh = app.add_subcommand("coherence", "Squared coherence with pointwise bands");
  add_common(coh);
  coh->add_option("--model", s.model, "Model or fit JSON");
  coh->add_option("--chain", s.chain, "Chain file");
  coh->add_option("--grid", s.grid, "Number of frequencies pi k / n, k = 1..n");
  coh->add_option("--i", s.i, "First component (1-based)");
  coh->add_option("--j", s.j, "Second component (1-based)");
  coh->add_option("--coverage", s.coverage, "Band coverage");
  coh->add_option("--thin", s.thin, "Use every thin-th retained draw");
  add_serial(coh);

  auto* glr = app.add_subcommand("glr", "Likelihood ratio test between two nested fits");
  add_common(glr);
  glr->add_option("--nested", s.nested, "Fit JSON of the smaller model")->required();
  glr->add_option("--nesting", s.nesting, "Fit JSON of the larger model")->required();
  glr->add_option("--df", s.df, "Degrees of freedom (default: difference in free parameters)");

  auto* bench = app.add_subcommand("forecast-benchmark",
                                   "Hold out the final values and compare with VAR(1)");
  add_common(bench);
  add_data(bench);
  bench->add_option("--q", s.q, "Cepstral order")->required()->check(CLI::NonNegativeNumber);
  bench->add_option("--holdout", s.holdout, "Held-out values");
  bench->add_option("--objective", s.objective, "gaussian, whittle or approx-whittle");
  bench->add_option("--max-iter", s.max_iter, "BFGS iteration limit");
  bench->add_option("--grad-tol", s.grad_tol, "Gradient sup-norm tolerance");
  add_truncation(bench);
  add_serial(bench);

  try {
    const std::vector<std::string> merged = merge_config(args);
    std::vector<const char*> argv{"vexp"};
    for (const auto& a : merged) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << kVersion << "\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out << app.help();
        return kExitOk;
      }
      print_error(err, "usage", e.what());
      return kExitUsage;
    }
    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "simulate") return cmd_simulate(s, *sub, out);
    if (name == "fit-mle") return cmd_fit_mle(s, *sub, out);
    if (name == "fit-bayes") return cmd_fit_bayes(s, *sub, out);
    if (name == "forecast") return cmd_forecast(s, *sub, out);
    if (name == "spectrum") return cmd_spectrum(s, *sub, out);
    if (name == "coherence") return cmd_coherence(s, *sub, out);
    if (name == "glr") return cmd_glr(s, *sub, out);
    if (name == "forecast-benchmark") return cmd_forecast_benchmark(s, *sub, out);
    print_error(err, "usage", "unknown command " + name);
    return kExitUsage;
  } catch (const UsageError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    print_error(err, "io", e.what());
    return kExitIo;
  } catch (const NumericalError& e) {
    print_error(err, "numerical", e.what());
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    print_error(err, "invalid", e.what());
    return kExitInvalid;
  } catch (const std::filesystem::filesystem_error& e) {
    print_error(err, "io", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitInternal;
  }
}

}  // namespace vexp
