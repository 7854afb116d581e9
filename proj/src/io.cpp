#include "nfe/io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace nfe {

using nlohmann::json;

ProblemFileError::ProblemFileError(std::string location, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", location, message)),
      location_(std::move(location)) {}

ProblemSource load_model(const std::string& name, const ParamMap& params) {
  ProblemSource s;
  try {
    s.model = make_model(name, std::map<std::string, double>(params.begin(), params.end()));
  } catch (const std::invalid_argument& e) {
    throw ProblemFileError("--model " + name, e.what());
  }
  s.origin = "model:" + name;
  s.params = params;
  return s;
}

namespace {

constexpr const char* kCoefficientFields[] = {"phi", "phi1", "phi2", "f"};

Expr parse_field(const std::string& origin, const std::string& field,
                 const std::string& source) {
  try {
    return parse(source);
  } catch (const ParseError& e) {
    throw ProblemFileError(fmt::format("{}: field '{}'", origin, field), e.what());
  }
}

RealFunction bind_field(const std::string& origin, const std::string& field, const Expr& e,
                        const ParamMap& params) {
  try {
    return e.bind(params);
  } catch (const UnboundParameterError& err) {
    throw ProblemFileError(fmt::format("{}: field '{}'", origin, field), err.what());
  }
}

double number_field(const json& doc, const char* key, double fallback,
                    const std::string& origin) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_number())
    throw ProblemFileError(fmt::format("{}: field '{}'", origin, key), "expected a number");
  return v.get<double>();
}

}  // namespace

ProblemSource parse_problem_document(std::string_view text, const ParamMap& overrides,
                                     const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemFileError(fmt::format("{}: byte {}", origin, e.byte), e.what());
  }
  if (!doc.is_object()) throw ProblemFileError(origin, "top level must be an object");

  ProblemSource s;
  s.origin = origin;
  if (doc.contains("parameters")) {
    const json& ps = doc.at("parameters");
    if (!ps.is_object())
      throw ProblemFileError(origin + ": field 'parameters'", "expected an object");
    for (const auto& [key, value] : ps.items()) {
      if (!value.is_number())
        throw ProblemFileError(fmt::format("{}: parameter '{}'", origin, key),
                               "expected a number");
      s.params[key] = value.get<double>();
    }
  }
  for (const auto& [key, value] : overrides) s.params[key] = value;

  std::map<std::string, RealFunction> fns;
  for (const char* field : kCoefficientFields) {
    if (!doc.contains(field))
      throw ProblemFileError(fmt::format("{}: field '{}'", origin, field), "missing");
    if (!doc.at(field).is_string())
      throw ProblemFileError(fmt::format("{}: field '{}'", origin, field),
                             "expected an expression string");
    const auto src = doc.at(field).get<std::string>();
    s.expressions[field] = src;
    fns[field] = bind_field(origin, field, parse_field(origin, field, src), s.params);
  }

  std::map<std::string, double> seminorms;
  if (doc.contains("seminorms")) {
    const json& sn = doc.at("seminorms");
    if (!sn.is_object())
      throw ProblemFileError(origin + ": field 'seminorms'", "expected an object");
    for (const auto& [key, value] : sn.items()) {
      const std::string where = fmt::format("{}: seminorms.{}", origin, key);
      if (std::find(std::begin(kCoefficientFields), std::end(kCoefficientFields), key) ==
          std::end(kCoefficientFields))
        throw ProblemFileError(where, "not a coefficient name");
      double v = 0.0;
      if (value.is_number()) {
        v = value.get<double>();
      } else if (value.is_string()) {
        const Expr e = parse_field(origin, "seminorms." + key, value.get<std::string>());
        try {
          v = e.evaluate(s.params, 0.0);
        } catch (const EvalError& err) {
          throw ProblemFileError(where, err.what());
        }
      } else {
        throw ProblemFileError(where, "expected a number or expression");
      }
      if (!(v >= 0.0)) throw ProblemFileError(where, "seminorm must be non-negative");
      seminorms[key] = v;
    }
  }
  auto coefficient = [&](const char* field) {
    std::optional<double> sn;
    if (auto it = seminorms.find(field); it != seminorms.end()) sn = it->second;
    return Coefficient(fns[field], sn, s.expressions[field]);
  };

  Problem& p = s.model.problem;
  p.name = doc.contains("name") && doc.at("name").is_string()
               ? doc.at("name").get<std::string>()
               : origin;
  p.phi = coefficient("phi");
  p.phi1 = coefficient("phi1");
  p.phi2 = coefficient("phi2");
  p.f = coefficient("f");
  p.u0 = number_field(doc, "u0", 0.0, origin);
  p.u1 = number_field(doc, "u1", 0.0, origin);

  if (doc.contains("exact")) {
    if (!doc.at("exact").is_string())
      throw ProblemFileError(origin + ": field 'exact'", "expected an expression string");
    const auto src = doc.at("exact").get<std::string>();
    s.expressions["exact"] = src;
    s.model.exact = bind_field(origin, "exact", parse_field(origin, "exact", src), s.params);
  }
  return s;
}

ProblemSource load_problem_file(const std::string& path, const ParamMap& overrides) {
  std::ifstream in(path);
  if (!in) throw ProblemFileError(path, "cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_document(buffer.str(), overrides, path);
}

std::string format_double(double v) {
  if (v == 0.0) return "0";  // no "-0"
  return fmt::format("{:.17g}", v);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += "\r\n";
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool pending = false;  // a row has started
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"': quoted = true; pending = true; break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        pending = true;
        break;
      case '\r': break;
      case '\n':
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        pending = false;
        break;
      default: field += c; pending = true;
    }
  }
  if (pending) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

SolutionTable solution_table(const PiecewiseLinear<double>& u, const Problem& homogenized,
                             const std::optional<RealFunction>& exact) {
  const bool lifted = homogenized.lift0 != 0.0 || homogenized.lift1 != 0.0;
  SolutionTable t;
  t.columns = {"x", "u_h"};
  if (lifted) t.columns.push_back("v_h");
  if (exact) {
    t.columns.push_back("exact");
    t.columns.push_back("abs_error");
  }
  const auto& g = u.grid();
  for (int i = 0; i <= g.n; ++i) {
    const double x = g.node(i);
    const double uh = u(x);
    std::vector<double> row = {x, uh};
    if (lifted) row.push_back(uh + homogenized.lift(x));
    if (exact) {
      const double e = (*exact)(x);
      row.push_back(e);
      row.push_back(std::abs(uh - e));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

const char* norm_name(Norm n) { return n == Norm::Sup ? "sup" : "rms"; }

}  // namespace

std::string to_csv(const SolutionTable& t) {
  std::string out = csv_row(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    for (double v : row) fields.push_back(format_double(v));
    out += csv_row(fields);
  }
  return out;
}

std::string to_csv(const ConvergenceTable& t) {
  std::string out =
      csv_row({"n", "h", "difference", "order", "error", "error_order", "exact_to_tolerance"});
  for (const auto& r : t.rows) {
    out += csv_row({std::to_string(r.n), format_double(r.h), opt(r.difference), opt(r.order),
                    opt(r.error), opt(r.error_order), r.exact_to_tolerance ? "1" : "0"});
  }
  return out;
}

std::string to_csv(const BenchmarkTable& t) {
  std::string out = csv_row({"kind", "n_or_depth", "assembly_seconds", "solve_seconds",
                             "total_seconds", "error"});
  for (const auto& r : t.rows) {
    out += csv_row({"collocation", std::to_string(r.n), format_double(r.assembly_seconds),
                    format_double(r.solve_seconds), format_double(r.total_seconds),
                    format_double(r.error_proxy)});
  }
  for (const auto& r : t.picard) {
    out += csv_row({"picard", std::to_string(r.depth), "", "", format_double(r.seconds),
                    format_double(r.rms_error)});
  }
  if (t.fit) {
    out += csv_row({"fit_exponent", "", "", "", format_double(t.fit->exponent), ""});
  }
  return out;
}

std::string table1_csv(const std::vector<OrderSweepCell>& cells) {
  std::vector<std::string> header = {"alpha/beta"};
  for (int b = 2; b <= 9; ++b) header.push_back(fmt::format("0.{}", b));
  std::string out = csv_row(header);
  for (int a = 1; a <= 8; ++a) {
    std::vector<std::string> row = {fmt::format("0.{}", a)};
    for (int b = 2; b <= 9; ++b) {
      if (b <= a) {
        row.push_back("--");
        continue;
      }
      auto it = std::find_if(cells.begin(), cells.end(), [&](const OrderSweepCell& c) {
        return std::lround(c.alpha * 10) == a && std::lround(c.beta * 10) == b;
      });
      if (it == cells.end() || !it->order) {
        row.push_back("—");
      } else {
        row.push_back(fmt::format("{:.2f}", *it->order));
      }
    }
    out += csv_row(row);
  }
  return out;
}

json to_json(const ValidationReport& r) {
  json violations = json::array();
  for (const auto& v : r.assumption_violations)
    violations.push_back({{"condition", v.condition}, {"x", v.x}, {"value", v.value}});
  auto sn = [](const Seminorm& s) {
    return json{{"value", s.value},
                {"source", s.analytic ? "analytic" : "estimated"},
                {"numeric_estimate", s.numeric}};
  };
  return json{{"assumption_violations", violations},
              {"seminorms",
               {{"phi", sn(r.phi)}, {"phi1", sn(r.phi1)}, {"phi2", sn(r.phi2)}, {"f", sn(r.f)}}},
              {"contraction_factor", r.contraction_factor},
              {"contraction_margin", r.contraction_margin},
              {"contraction_warning", !r.contractive()},
              {"apriori_bound", opt_json(r.apriori_bound)}};
}

json to_json(const ErrorMetrics& m) {
  return json{{"sup_error", m.sup_error},
              {"rms_error", m.rms_error},
              {"lipschitz_error", m.lipschitz_error},
              {"eval_points", m.eval_points}};
}

json to_json(const ConvergenceTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", r.n},
                    {"h", r.h},
                    {"difference", opt_json(r.difference)},
                    {"order", opt_json(r.order)},
                    {"error", opt_json(r.error)},
                    {"error_order", opt_json(r.error_order)},
                    {"exact_to_tolerance", r.exact_to_tolerance}});
  }
  return json{{"base_n", t.base_n},
              {"mode", t.mode == OrderMode::Extrapolation ? "extrapolation" : "exact_reference"},
              {"norm", norm_name(t.norm)},
              {"eval_points", t.eval_points},
              {"failure", t.failure ? json(*t.failure) : json(nullptr)},
              {"rows", rows}};
}

json to_json(const BenchmarkTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"n", r.n},
                    {"assembly_seconds", r.assembly_seconds},
                    {"solve_seconds", r.solve_seconds},
                    {"total_seconds", r.total_seconds},
                    {"error_proxy", r.error_proxy}});
  json picard = json::array();
  for (const auto& r : t.picard)
    picard.push_back({{"depth", r.depth}, {"seconds", r.seconds}, {"rms_error", r.rms_error}});
  json out{{"rows", rows}, {"picard", picard}};
  out["fit"] = t.fit ? json{{"exponent", t.fit->exponent}, {"prefactor", t.fit->prefactor}}
                     : json(nullptr);
  return out;
}

json to_json(const SolutionTable& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r;
    for (std::size_t c = 0; c < t.columns.size(); ++c) r[t.columns[c]] = row[c];
    rows.push_back(r);
  }
  return json{{"columns", t.columns}, {"rows", rows}};
}

json to_json(const std::vector<OrderSweepCell>& cells) {
  json out = json::array();
  for (const auto& c : cells)
    out.push_back({{"alpha", c.alpha},
                   {"beta", c.beta},
                   {"order", opt_json(c.order)},
                   {"failure", c.failure ? json(*c.failure) : json(nullptr)}});
  return out;
}

json describe(const ProblemSource& s) {
  const Problem& p = s.model.problem;
  json params = json::object();
  for (const auto& [k, v] : s.params) params[k] = v;
  json coefficients = json::object();
  if (!s.expressions.empty()) {
    for (const auto& [k, v] : s.expressions) coefficients[k] = v;
  } else {
    coefficients = {{"phi", p.phi.description},
                    {"phi1", p.phi1.description},
                    {"phi2", p.phi2.description},
                    {"f", p.f.description}};
  }
  return json{{"name", p.name},
              {"origin", s.origin},
              {"parameters", params},
              {"coefficients", coefficients},
              {"u0", p.u0},
              {"u1", p.u1},
              {"lift", {{"u0", p.lift0}, {"u1", p.lift1}}},
              {"exact_known", s.model.exact.has_value()}};
}

}  // namespace nfe
