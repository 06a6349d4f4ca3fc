#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vexp/bayes.hpp"
#include "vexp/cepstral.hpp"
#include "vexp/likelihood.hpp"
#include "vexp/mle.hpp"
#include "vexp/types.hpp"

namespace vexp {

/// Malformed input file; the message names the file and, for CSV, the row
/// (1-based line number) and column.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal text that reads back to the same double. Independent of
/// the global locale.
std::string format_double(double x);

/// CSV with a header row; columns are series, rows are time points.
DataPanel parse_csv(std::istream& in, const std::string& source = "<input>");
DataPanel load_csv(const std::filesystem::path& path);

/// Header plus one line per row, LF line endings.
void write_table(std::ostream& out, const std::vector<std::string>& header, const Matrix& rows);
void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const Matrix& rows);
void write_csv(std::ostream& out, const DataPanel& panel);
void write_csv(const std::filesystem::path& path, const DataPanel& panel);

/// Row t of the result is row t + s minus row t of the input.
DataPanel seasonal_difference(const DataPanel& panel, Index s);

/// Model file: {m, q, omega0, omegas, delta}; matrices are objects
/// {rows, cols, data} with data in row-major order.
struct ModelFile {
  CepstralModel model;
  Vector delta;
};
std::string model_to_json(const CepstralModel& model, const Vector& delta);
/// Also accepts a fit file, which carries the same top-level fields.
ModelFile model_from_json(std::string_view text, const std::string& source = "<input>");
void save_model(const std::filesystem::path& path, const CepstralModel& model,
                const Vector& delta);
ModelFile load_model(const std::filesystem::path& path);

/// Fit file: the model fields (delta = sample mean) plus a "fit" object.
/// Undefined standard errors are written as null.
std::string fit_to_json(const FitResult& fit);
FitResult fit_from_json(std::string_view text, const std::string& source = "<input>");
void save_fit(const std::filesystem::path& path, const FitResult& fit);
FitResult load_fit(const std::filesystem::path& path);

/// Chain file: a header record followed by one record per draw, one JSON
/// object per line.
void write_chain(std::ostream& out, const Chain& chain);
Chain read_chain(std::istream& in, const std::string& source = "<input>");
void save_chain(const std::filesystem::path& path, const Chain& chain);
Chain load_chain(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

/// `explicit_path` if given, otherwise `default_name` inside $VEXP_OUTPUT_DIR
/// (or the working directory when unset).
std::filesystem::path output_path(const std::optional<std::string>& explicit_path,
                                  const std::string& default_name);

}  // namespace vexp
