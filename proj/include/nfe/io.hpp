#ifndef NFE_IO_HPP
#define NFE_IO_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nfe/analysis.hpp"
#include "nfe/collocation.hpp"
#include "nfe/expr.hpp"
#include "nfe/models.hpp"
#include "nfe/problem.hpp"

namespace nfe {

inline constexpr const char* kToolName = "nfe";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kCsvSchemaVersion = 1;

/// Problem-file or model-lookup failure; `location` names the offending
/// field (or byte offset for malformed JSON).
class ProblemFileError : public std::runtime_error {
 public:
  ProblemFileError(std::string location, const std::string& message);
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// A resolved problem together with how it was specified.
struct ProblemSource {
  Model model;
  std::string origin;  // "model:<name>" or the file path
  ParamMap params;
  std::map<std::string, std::string> expressions;  // file-defined problems only
};

ProblemSource load_model(const std::string& name, const ParamMap& params);

/// Parses a problem document (JSON). `overrides` take precedence over the
/// file's own parameter bindings.
ProblemSource parse_problem_document(std::string_view text, const ParamMap& overrides,
                                     const std::string& origin = "<string>");

ProblemSource load_problem_file(const std::string& path, const ParamMap& overrides);

/// 17 significant digits; parses back to the same double.
std::string format_double(double v);

/// RFC-4180 quoting for one field.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Node table with columns x, u_h[, v_h][, exact, abs_error].
struct SolutionTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

SolutionTable solution_table(const PiecewiseLinear<double>& u, const Problem& homogenized,
                             const std::optional<RealFunction>& exact);

std::string to_csv(const SolutionTable& t);
std::string to_csv(const ConvergenceTable& t);
std::string to_csv(const BenchmarkTable& t);
/// Upper-triangular alpha/beta matrix; "--" below the diagonal and "—" for
/// failed cells.
std::string table1_csv(const std::vector<OrderSweepCell>& cells);

nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const ErrorMetrics& m);
nlohmann::json to_json(const ConvergenceTable& t);
nlohmann::json to_json(const BenchmarkTable& t);
nlohmann::json to_json(const SolutionTable& t);
nlohmann::json to_json(const std::vector<OrderSweepCell>& cells);
nlohmann::json describe(const ProblemSource& s);

}  // namespace nfe

#endif  // NFE_IO_HPP
