#include "vexp/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace vexp {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool parse_double(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  return out;
}

json matrix_json(const Matrix& a) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.size()));
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) data.push_back(a(r, c));
  }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

std::vector<double> number_array(const json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (x.is_null()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
    } else if (x.is_number()) {
      out.push_back(x.get<double>());
    } else {
      throw IoError(what + " must contain numbers");
    }
  }
  return out;
}

Matrix matrix_from(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw IoError(what + " must be an object with rows, cols and data");
  }
  const Index rows = j.at("rows").get<Index>();
  const Index cols = j.at("cols").get<Index>();
  const auto data = number_array(j.at("data"), what + ".data");
  if (rows < 0 || cols < 0 || static_cast<Index>(data.size()) != rows * cols) {
    throw IoError(what + ": data length does not match rows x cols");
  }
  Matrix a(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) a(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return a;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j, const std::string& what) {
  const auto d = number_array(j, what);
  return Eigen::Map<const Vector>(d.data(), static_cast<Index>(d.size()));
}

json model_json(const CepstralModel& model, const Vector& delta) {
  json omegas = json::array();
  for (const auto& w : model.omegas()) omegas.push_back(matrix_json(w));
  return {{"m", model.dim()},
          {"q", model.order()},
          {"omega0", matrix_json(model.omega0())},
          {"omegas", omegas},
          {"delta", vector_json(delta)}};
}

ModelFile model_from(const json& j) {
  for (const char* key : {"m", "q", "omega0", "omegas", "delta"}) {
    if (!j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
  }
  const Index m = j.at("m").get<Index>();
  const Index q = j.at("q").get<Index>();
  const Matrix omega0 = matrix_from(j.at("omega0"), "omega0");
  if (omega0.rows() != m || omega0.cols() != m) throw IoError("omega0 is not m x m");
  if (!j.at("omegas").is_array() || static_cast<Index>(j.at("omegas").size()) != q) {
    throw IoError("omegas must be a list of q matrices");
  }
  std::vector<Matrix> omegas;
  for (std::size_t k = 0; k < j.at("omegas").size(); ++k) {
    Matrix w = matrix_from(j.at("omegas")[k], "omegas[" + std::to_string(k) + "]");
    if (w.rows() != m || w.cols() != m) throw IoError("omegas entries must be m x m");
    omegas.push_back(std::move(w));
  }
  Vector delta = vector_from(j.at("delta"), "delta");
  if (delta.size() != m) throw IoError("delta must have m entries");
  try {
    return {CepstralModel(omega0, std::move(omegas)), std::move(delta)};
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

json parse_json(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(source + ": invalid JSON: " + e.what());
  }
}

template <typename F>
auto with_source(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(source + ": " + e.what());
  } catch (const json::exception& e) {
    throw IoError(source + ": " + e.what());
  }
}

std::vector<std::uint8_t> flags_from(const json& j, const std::string& what) {
  if (!j.is_array()) throw IoError(what + " must be an array");
  std::vector<std::uint8_t> out;
  for (const auto& x : j) {
    const int v = x.get<int>();
    if (v != 0 && v != 1) throw IoError(what + " entries must be 0 or 1");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

DataPanel parse_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      header = split_row(line);
      break;
    }
  }
  if (header.empty()) throw IoError(source + ": empty file (no header row)");
  for (std::size_t c = 0; c < header.size(); ++c) {
    header[c] = unquote(header[c]);
    if (header[c].empty()) {
      throw IoError(source + ": row " + std::to_string(line_no) + ", column " +
                    std::to_string(c + 1) + ": empty column name");
    }
  }
  const std::size_t m = header.size();
  std::vector<double> values;
  Index T = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != m) {
      throw IoError(source + ": row " + std::to_string(line_no) + ": expected " +
                    std::to_string(m) + " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < m; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw IoError(source + ": row " + std::to_string(line_no) + ", column " +
                      std::to_string(c + 1) + " (" + header[c] + "): non-numeric cell '" +
                      cells[c] + "'");
      }
      values.push_back(v);
    }
    ++T;
  }
  if (T == 0) throw IoError(source + ": no data rows after the header");
  Matrix x(T, static_cast<Index>(m));
  for (Index t = 0; t < T; ++t) {
    for (Index c = 0; c < static_cast<Index>(m); ++c) {
      x(t, c) = values[static_cast<std::size_t>(t * static_cast<Index>(m) + c)];
    }
  }
  return DataPanel(std::move(x), std::move(header));
}

DataPanel load_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_csv(in, path.string());
}

void write_table(std::ostream& out, const std::vector<std::string>& header, const Matrix& rows) {
  if (static_cast<Index>(header.size()) != rows.cols()) {
    throw std::invalid_argument("write_table: header size does not match the column count");
  }
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  for (Index r = 0; r < rows.rows(); ++r) {
    for (Index c = 0; c < rows.cols(); ++c) out << (c ? "," : "") << format_double(rows(r, c));
    out << '\n';
  }
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const Matrix& rows) {
  auto out = open_out(path);
  write_table(out, header, rows);
  if (!out) throw IoError(path.string() + ": write failed");
}

void write_csv(std::ostream& out, const DataPanel& panel) {
  write_table(out, panel.names(), panel.values());
}

void write_csv(const std::filesystem::path& path, const DataPanel& panel) {
  write_table(path, panel.names(), panel.values());
}

DataPanel seasonal_difference(const DataPanel& panel, Index s) {
  if (s < 1) throw std::invalid_argument("seasonal_difference: lag must be >= 1");
  const Index T = panel.length();
  if (T <= s) {
    throw std::invalid_argument("seasonal_difference: need more than " + std::to_string(s) +
                                " rows, have " + std::to_string(T));
  }
  const Matrix& x = panel.values();
  return DataPanel(x.bottomRows(T - s) - x.topRows(T - s), panel.names());
}

std::string model_to_json(const CepstralModel& model, const Vector& delta) {
  if (delta.size() != model.dim()) throw std::invalid_argument("model_to_json: delta length");
  return model_json(model, delta).dump(2) + "\n";
}

ModelFile model_from_json(std::string_view text, const std::string& source) {
  return with_source(source, [&] { return model_from(parse_json(text, source)); });
}

void save_model(const std::filesystem::path& path, const CepstralModel& model,
                const Vector& delta) {
  write_text(path, model_to_json(model, delta));
}

ModelFile load_model(const std::filesystem::path& path) {
  return model_from_json(read_text(path), path.string());
}

std::string fit_to_json(const FitResult& fit) {
  json j = model_json(fit.model, fit.mean);
  std::vector<int> mask(fit.zero_mask.begin(), fit.zero_mask.end());
  j["fit"] = {{"objective", to_string(fit.kind)},
              {"T", fit.T},
              {"estimate", vector_json(fit.estimate)},
              {"std_errors", vector_json(fit.std_errors)},
              {"covariance", matrix_json(fit.covariance)},
              {"zero_mask", mask},
              {"mean_std_errors", vector_json(fit.mean_std_errors)},
              {"objective_value", fit.objective_value},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"gradient_norm", fit.gradient_norm}};
  return j.dump(2) + "\n";
}

FitResult fit_from_json(std::string_view text, const std::string& source) {
  return with_source(source, [&] {
    const json j = parse_json(text, source);
    ModelFile mf = model_from(j);
    if (!j.contains("fit")) throw IoError("missing field 'fit'");
    const json& f = j.at("fit");
    FitResult fit;
    fit.kind = parse_objective_kind(f.at("objective").get<std::string>());
    fit.q = mf.model.order();
    fit.T = f.at("T").get<Index>();
    fit.model = std::move(mf.model);
    fit.mean = std::move(mf.delta);
    fit.estimate = vector_from(f.at("estimate"), "fit.estimate");
    fit.std_errors = vector_from(f.at("std_errors"), "fit.std_errors");
    fit.covariance = matrix_from(f.at("covariance"), "fit.covariance");
    for (int b : f.at("zero_mask").get<std::vector<int>>()) fit.zero_mask.push_back(b != 0);
    fit.mean_std_errors = vector_from(f.at("mean_std_errors"), "fit.mean_std_errors");
    fit.objective_value = f.at("objective_value").get<double>();
    fit.iterations = f.at("iterations").get<int>();
    fit.converged = f.at("converged").get<bool>();
    fit.gradient_norm = f.at("gradient_norm").get<double>();
    if (fit.estimate.size() != param_count(fit.model.dim(), fit.q)) {
      throw IoError("fit.estimate has the wrong length");
    }
    return fit;
  });
}

void save_fit(const std::filesystem::path& path, const FitResult& fit) {
  write_text(path, fit_to_json(fit));
}

FitResult load_fit(const std::filesystem::path& path) {
  return fit_from_json(read_text(path), path.string());
}

void write_chain(std::ostream& out, const Chain& chain) {
  const Vector delta0 = chain.priors.delta0.value_or(Vector::Zero(chain.m));
  json header = {{"record", "header"},
                 {"format", "vexp-chain"},
                 {"version", 1},
                 {"m", chain.m},
                 {"q", chain.q},
                 {"iterations", chain.iterations},
                 {"burn_in", chain.burn_in},
                 {"seed", chain.seed},
                 {"ssvs",
                  {{"enabled", chain.ssvs.enabled},
                   {"tau", chain.ssvs.tau},
                   {"c", chain.ssvs.c},
                   {"pi", chain.ssvs.pi}}},
                 {"priors",
                  {{"delta0", vector_json(delta0)},
                   {"ig_a", chain.priors.ig_a},
                   {"ig_b", chain.priors.ig_b},
                   {"sigma_v", chain.priors.sigma_v}}},
                 {"proposed", chain.proposed},
                 {"accepted", chain.accepted},
                 {"proposal_scales", vector_json(chain.proposal_scales)},
                 {"warnings", chain.warnings},
                 {"draws", chain.draws.size()}};
  out << header.dump() << '\n';
  for (const auto& s : chain.draws) {
    const json d = {{"v", vector_json(s.v)},
                    {"gamma", s.gamma},
                    {"omega0", vector_json(s.omega0_entries)},
                    {"gamma_omega0", s.gamma_omega0},
                    {"delta", vector_json(s.delta)},
                    {"var_mu", vector_json(s.var_mu)},
                    {"var_omega0", vector_json(s.var_omega0)}};
    out << d.dump() << '\n';
  }
}

Chain read_chain(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  auto located = [&](const std::string& what) {
    return IoError(source + ": line " + std::to_string(line_no) + ": " + what);
  };
  if (!std::getline(in, line)) throw IoError(source + ": empty chain file");
  ++line_no;
  Chain chain;
  std::size_t expected = 0;
  try {
    const json h = json::parse(line);
    if (h.value("format", "") != "vexp-chain") throw located("not a chain header record");
    chain.m = h.at("m").get<Index>();
    chain.q = h.at("q").get<Index>();
    chain.iterations = h.at("iterations").get<long>();
    chain.burn_in = h.at("burn_in").get<long>();
    chain.seed = h.at("seed").get<std::uint64_t>();
    const json& s = h.at("ssvs");
    chain.ssvs = {s.at("tau").get<double>(), s.at("c").get<double>(), s.at("pi").get<double>(),
                  s.at("enabled").get<bool>()};
    const json& p = h.at("priors");
    chain.priors.delta0 = vector_from(p.at("delta0"), "priors.delta0");
    chain.priors.ig_a = p.at("ig_a").get<double>();
    chain.priors.ig_b = p.at("ig_b").get<double>();
    chain.priors.sigma_v = p.at("sigma_v").get<double>();
    chain.proposed = h.at("proposed").get<std::vector<long>>();
    chain.accepted = h.at("accepted").get<std::vector<long>>();
    chain.proposal_scales = vector_from(h.at("proposal_scales"), "proposal_scales");
    chain.warnings = h.at("warnings").get<std::vector<std::string>>();
    expected = h.at("draws").get<std::size_t>();
  } catch (const json::exception& e) {
    throw located(std::string("bad header: ") + e.what());
  }
  const Index p = chain.q * chain.m * chain.m;
  const Index n0 = chain.m * (chain.m + 1) / 2;
  chain.draws.reserve(expected);
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json d = json::parse(line);
      SsvsState s;
      s.v = vector_from(d.at("v"), "v");
      s.gamma = flags_from(d.at("gamma"), "gamma");
      s.omega0_entries = vector_from(d.at("omega0"), "omega0");
      s.gamma_omega0 = flags_from(d.at("gamma_omega0"), "gamma_omega0");
      s.delta = vector_from(d.at("delta"), "delta");
      s.var_mu = vector_from(d.at("var_mu"), "var_mu");
      s.var_omega0 = vector_from(d.at("var_omega0"), "var_omega0");
      if (s.v.size() != p || static_cast<Index>(s.gamma.size()) != p ||
          s.omega0_entries.size() != n0 ||
          static_cast<Index>(s.gamma_omega0.size()) != n0 - chain.m ||
          s.delta.size() != chain.m || s.var_mu.size() != chain.m ||
          s.var_omega0.size() != chain.m) {
        throw located("draw has the wrong dimensions");
      }
      chain.draws.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw located(std::string("bad draw record: ") + e.what());
    } catch (const IoError& e) {
      if (std::string_view(e.what()).rfind(source, 0) == 0) throw;
      throw located(e.what());
    }
  }
  if (chain.draws.size() != expected) {
    throw IoError(source + ": header announces " + std::to_string(expected) + " draws, found " +
                  std::to_string(chain.draws.size()));
  }
  if (chain.burn_in > static_cast<long>(chain.draws.size())) {
    throw IoError(source + ": burn_in exceeds the number of draws");
  }
  return chain;
}

void save_chain(const std::filesystem::path& path, const Chain& chain) {
  auto out = open_out(path);
  write_chain(out, chain);
  if (!out) throw IoError(path.string() + ": write failed");
}

Chain load_chain(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_chain(in, path.string());
}

std::string read_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError(path.string() + ": write failed");
}

std::filesystem::path output_path(const std::optional<std::string>& explicit_path,
                                  const std::string& default_name) {
  if (explicit_path && !explicit_path->empty()) return *explicit_path;
  const char* dir = std::getenv("VEXP_OUTPUT_DIR");
  if (dir && *dir) return std::filesystem::path(dir) / default_name;
  return default_name;
}

}  // namespace vexp
