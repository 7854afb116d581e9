#include "nfe/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nfe/analysis.hpp"
#include "nfe/io.hpp"
#include "nfe/picard.hpp"

namespace nfe::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string model;
  std::string file;
  std::vector<std::string> params;
  std::string format = "csv";
  std::string out;
  bool strict = false;
  unsigned seed = 0;

  // solve
  int n = 100;
  // order
  int base_n = 256;
  int levels = 3;
  int eval_points = kDefaultOrderPoints;
  std::string norm = "sup";
  bool table1 = false;
  // bench
  std::vector<int> n_values = {64, 128, 256, 512, 1024};
  int repetitions = 3;
  bool include_picard = false;
  int picard_depth = 20;
  int picard_points = 32;
  // validate
  int samples = 1000;
  int contraction_trials = 0;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InputError(fmt::format("--param '{}': expected NAME=VALUE", item));
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != text.size())
      throw InputError(fmt::format("--param '{}': '{}' is not a number", item, text));
    params[name] = value;
  }
  return params;
}

ProblemSource resolve(const Options& o) {
  const ParamMap params = parse_params(o.params);
  if (!o.file.empty()) return load_problem_file(o.file, params);
  return load_model(o.model.empty() ? "fish" : o.model, params);
}

json configuration(const std::string& command, const Options& o) {
  json c{{"command", command},   {"model", o.model},   {"file", o.file},
         {"params", o.params},   {"format", o.format}, {"strict", o.strict},
         {"seed", o.seed}};
  if (command == "solve") c["n"] = o.n;
  if (command == "order") {
    c["base_n"] = o.base_n;
    c["levels"] = o.levels;
    c["eval_points"] = o.eval_points;
    c["norm"] = o.norm;
    c["table1"] = o.table1;
  }
  if (command == "bench") {
    c["n_values"] = o.n_values;
    c["repetitions"] = o.repetitions;
    c["include_picard"] = o.include_picard;
    c["picard_depth"] = o.picard_depth;
    c["picard_points"] = o.picard_points;
  }
  if (command == "validate") {
    c["samples"] = o.samples;
    c["contraction_trials"] = o.contraction_trials;
  }
  return c;
}

json envelope(const std::string& command, const Options& o) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"csv_schema", kCsvSchemaVersion},
              {"configuration", configuration(command, o)}};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError(fmt::format("cannot write '{}'", o.out));
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void warn_validation(const ValidationReport& r, std::ostream& err) {
  for (const auto& v : r.assumption_violations)
    err << fmt::format("warning: assumption '{}' violated at x = {:.17g} (value {:.17g})\n",
                       v.condition, v.x, v.value);
  if (!r.contractive())
    err << fmt::format(
        "warning: contraction margin {:.6g} is not positive; existence and "
        "uniqueness are not guaranteed\n",
        r.contraction_margin);
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n < 2) throw InputError("--n must be at least 2");
  const ProblemSource src = resolve(o);
  const ValidationReport report = validate(src.model.problem, o.samples);
  warn_validation(report, err);
  if (o.strict && !report.ok()) return kAssumptionViolation;

  const Problem q = homogenize(src.model.problem);
  const SolveReport solved = solve(assemble(q, Grid<double>(o.n)));
  if (solved.condition_warning)
    err << fmt::format("warning: small pivot {:.3g}; the system is ill-conditioned\n",
                       solved.min_pivot);
  const SolutionTable table = solution_table(solved.solution, q, src.model.exact);

  if (o.format == "csv") {
    emit(o, to_csv(table), out);
    return kOk;
  }
  json doc = envelope("solve", o);
  doc["problem"] = describe(src);
  doc["validation"] = to_json(report);
  doc["solution"] = to_json(table);
  doc["diagnostics"] = {{"residual_max", solved.residual_max},
                        {"continuity_residual", solved.continuity_residual},
                        {"boundary_residual", solved.boundary_residual},
                        {"condition_warning", solved.condition_warning},
                        {"min_pivot", solved.min_pivot},
                        {"max_pivot", solved.max_pivot}};
  if (src.model.exact)
    doc["error_metrics"] =
        to_json(compare(solved.solution, *src.model.exact, kDefaultOrderPoints));
  doc["timings"] = {
      {"solve_seconds", std::chrono::duration<double>(solved.solve_time).count()}};
  emit(o, dump(doc), out);
  return kOk;
}

OrderOptions order_options(const Options& o) {
  if (o.norm != "sup" && o.norm != "rms") throw InputError("--norm must be sup or rms");
  OrderOptions opts;
  opts.norm = o.norm == "sup" ? Norm::Sup : Norm::Rms;
  opts.eval_points = o.eval_points;
  return opts;
}

int cmd_order(const Options& o, std::ostream& out, std::ostream& err) {
  OrderOptions opts = order_options(o);
  if (o.table1) {
    const auto cells = fish_order_sweep(o.base_n, o.levels, opts);
    for (const auto& c : cells)
      if (!c.order)
        err << fmt::format("warning: alpha = {}, beta = {}: {}\n", c.alpha, c.beta,
                           c.failure.value_or("order not available"));
    if (o.format == "csv") {
      emit(o, table1_csv(cells), out);
    } else {
      json doc = envelope("order", o);
      doc["table1"] = to_json(cells);
      emit(o, dump(doc), out);
    }
    return kOk;
  }

  const ProblemSource src = resolve(o);
  const ValidationReport report = validate(src.model.problem, o.samples);
  warn_validation(report, err);
  if (o.strict && !report.ok()) return kAssumptionViolation;

  opts.exact = src.model.exact;
  const ConvergenceTable table = estimate_order(src.model.problem, o.base_n, o.levels, opts);
  if (table.failure) err << "error: " << *table.failure << "\n";
  if (o.format == "csv") {
    emit(o, to_csv(table), out);
  } else {
    json doc = envelope("order", o);
    doc["problem"] = describe(src);
    doc["validation"] = to_json(report);
    doc["convergence"] = to_json(table);
    emit(o, dump(doc), out);
  }
  return table.failure ? kSingularSystem : kOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.n_values.empty()) throw InputError("--n needs at least one value");
  const ProblemSource src = resolve(o);
  std::vector<int> ns = o.n_values;
  BenchmarkTable table = benchmark(src.model.problem, ns, o.repetitions, src.model.exact);
  if (o.include_picard) {
    const Problem q = homogenize(src.model.problem);
    const ValidationReport report = validate(q, o.samples);
    if (!report.contractive())
      err << "warning: Picard iteration is not guaranteed to converge for this problem\n";
    RealFunction reference;
    if (src.model.exact) {
      reference = *src.model.exact;
    } else {
      auto fine = std::make_shared<PiecewiseLinear<double>>(solve(q, 1024).solution);
      reference = [fine](double x) { return (*fine)(x); };
    }
    table.picard = picard_cost(q, reference, o.picard_depth, o.picard_points, 1);
  }
  if (o.format == "csv") {
    emit(o, to_csv(table), out);
  } else {
    json doc = envelope("bench", o);
    doc["problem"] = describe(src);
    doc["benchmark"] = to_json(table);
    emit(o, dump(doc), out);
  }
  return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const ProblemSource src = resolve(o);
  const ValidationReport report = validate(src.model.problem, o.samples);
  warn_validation(report, err);
  std::optional<ContractionCheck> check;
  if (o.contraction_trials > 0)
    check = check_contraction(src.model.problem, o.contraction_trials, 64, o.seed);

  if (o.format == "csv") {
    std::string text = csv_row({"quantity", "x", "value"});
    for (const auto& v : report.assumption_violations)
      text += csv_row({"violation: " + v.condition, format_double(v.x), format_double(v.value)});
    text += csv_row({"seminorm_phi", "", format_double(report.phi.value)});
    text += csv_row({"seminorm_phi1", "", format_double(report.phi1.value)});
    text += csv_row({"seminorm_phi2", "", format_double(report.phi2.value)});
    text += csv_row({"seminorm_f", "", format_double(report.f.value)});
    text += csv_row({"contraction_margin", "", format_double(report.contraction_margin)});
    if (report.apriori_bound)
      text += csv_row({"apriori_bound", "", format_double(*report.apriori_bound)});
    if (check) text += csv_row({"contraction_worst_ratio", "", format_double(check->worst_ratio)});
    emit(o, text, out);
  } else {
    json doc = envelope("validate", o);
    doc["problem"] = describe(src);
    doc["validation"] = to_json(report);
    if (check)
      doc["contraction_check"] = {{"trials", check->trials},
                                  {"bound_factor", check->bound_factor},
                                  {"worst_ratio", check->worst_ratio},
                                  {"worst_excess", check->worst_excess},
                                  {"passed", check->passed()}};
    emit(o, dump(doc), out);
  }
  return o.strict && !report.ok() ? kAssumptionViolation : kOk;
}

void add_problem_options(CLI::App* cmd, Options& o) {
  auto* model = cmd->add_option("--model", o.model, "built-in model: fish, fish-raw, smooth, nonsmooth");
  auto* file = cmd->add_option("--file", o.file, "problem definition file (JSON)");
  model->excludes(file);
  cmd->add_option("--param", o.params, "parameter binding NAME=VALUE (repeatable)");
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_flag("--strict", o.strict, "fail on assumption violations");
  cmd->add_option("--seed", o.seed, "seed for randomized checks");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Collocation solver for nonlocal functional equations"};
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write the node table");
  add_problem_options(solve_cmd, o);
  add_output_options(solve_cmd, o);
  solve_cmd->add_option("--n", o.n, "number of subintervals")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--samples", o.samples, "validation sample count");

  auto* order_cmd = app.add_subcommand("order", "estimate the convergence order");
  add_problem_options(order_cmd, o);
  add_output_options(order_cmd, o);
  order_cmd->add_option("--base-n", o.base_n, "coarsest number of subintervals (power of two)");
  order_cmd->add_option("--levels", o.levels, "number of refinement levels (>= 3)");
  order_cmd->add_option("--eval-points", o.eval_points, "uniform points for the difference norms");
  order_cmd->add_option("--norm", o.norm, "sup or rms");
  order_cmd->add_flag("--table1", o.table1, "sweep the fish model over the alpha < beta grid");
  order_cmd->add_option("--samples", o.samples, "validation sample count");

  auto* bench_cmd = app.add_subcommand("bench", "time the solver over a list of n");
  add_problem_options(bench_cmd, o);
  add_output_options(bench_cmd, o);
  bench_cmd->add_option("--n", o.n_values, "comma-separated list of n")->delimiter(',');
  bench_cmd->add_option("--repetitions", o.repetitions, "timed repetitions (median)")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--include-picard", o.include_picard, "add exact-recursive Picard rows");
  bench_cmd->add_option("--picard-depth", o.picard_depth, "largest Picard depth K")
      ->check(CLI::Range(1, kMaxRecursiveDepth));
  bench_cmd->add_option("--picard-points", o.picard_points, "points for the Picard RMS error")
      ->check(CLI::Range(2, 100000));
  bench_cmd->add_option("--samples", o.samples, "validation sample count");

  auto* validate_cmd = app.add_subcommand("validate", "check assumptions and the contraction condition");
  add_problem_options(validate_cmd, o);
  add_output_options(validate_cmd, o);
  validate_cmd->add_option("--samples", o.samples, "validation sample count");
  validate_cmd->add_option("--contraction-trials", o.contraction_trials,
                           "random piecewise-linear trials for the operator bound");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(o, out, err);
    if (order_cmd->parsed()) return cmd_order(o, out, err);
    if (bench_cmd->parsed()) return cmd_bench(o, out, err);
    return cmd_validate(o, out, err);
  } catch (const SingularSystem& e) {
    err << "error: " << e.what() << "\n";
    return kSingularSystem;
  } catch (const ProblemFileError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParameterDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const OutOfDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace nfe::cli
