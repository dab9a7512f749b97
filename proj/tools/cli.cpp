#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lassoeq/categorize.hpp"
#include "lassoeq/dataset.hpp"
#include "lassoeq/equivalence.hpp"
#include "lassoeq/errors.hpp"
#include "lassoeq/lasso.hpp"
#include "lassoeq/report.hpp"
#include "lassoeq/serialize.hpp"
#include "lassoeq/spectral.hpp"

namespace lassoeq::cli {

using Eigen::Index;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

constexpr double kGridMinExponent = -3.0;
constexpr double kGridMaxExponent = 3.0;
constexpr double kGridStepExponent = 0.1;

std::optional<double> parse_lambda(const std::string& spec) {
  if (spec == "auto") return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), v);
  if (ec != std::errc() || ptr != spec.data() + spec.size() || !std::isfinite(v) || v <= 0.0)
    throw InputError("--lambda must be 'auto' or a positive number, got '" + spec + "'");
  return v;
}

std::optional<Index> parse_istar(const std::string& spec) {
  if (spec == "strong") return std::nullopt;
  long v = 0;
  const auto [ptr, ec] = std::from_chars(spec.data(), spec.data() + spec.size(), v);
  if (ec != std::errc() || ptr != spec.data() + spec.size() || v < 0)
    throw InputError("--istar must be 'strong' or a non-negative integer, got '" + spec + "'");
  return static_cast<Index>(v);
}

void validate(const RunConfig& c) {
  if (!(c.tol >= 0.0) || !std::isfinite(c.tol)) throw InputError("--tol must be a finite number >= 0");
  if (c.d_max < 1) throw InputError("--dmax must be at least 1");
  if (c.folds < 2) throw InputError("--folds must be at least 2");
  if (c.dim_cap < 1) throw InputError("--dim-cap must be at least 1");
  task_from_string(c.task);
  if (c.metric != "auto") metric_from_string(c.metric);
  parse_lambda(c.lambda_spec);
  parse_istar(c.i_star);
}

json config_json(const RunConfig& c) {
  json j;
  j["data_path"] = c.data_path;
  j["target_column"] = c.target_column;
  j["task"] = c.task;
  if (const auto lam = parse_lambda(c.lambda_spec))
    j["lambda"] = *lam;
  else
    j["lambda"] = "auto";
  j["tol"] = c.tol;
  j["d_max"] = c.d_max;
  j["i_star"] = c.i_star;
  j["folds"] = c.folds;
  j["seed"] = c.seed;
  j["metric"] = c.metric;
  j["strict_break"] = c.strict_break;
  j["dim_cap"] = c.dim_cap;
  j["strong"] = c.strong;
  j["model_path"] = c.model_path;
  j["solutions_path"] = c.solutions_path;
  j["scores_path"] = c.scores_path;
  return j;
}

json vector_json(const VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

void write_json(const std::string& path, const json& j) {
  if (path.empty()) throw InputError("--out is required");
  write_file_atomic(path, j.dump(2) + "\n");
}

/// Model plus the standardized data it was fitted on.
struct LoadedModel {
  LassoSolution solution;
  Dataset data;
};

LoadedModel load_model(const RunConfig& c) {
  if (c.model_path.empty()) throw InputError("--model is required");
  const json j = read_json_file(c.model_path);
  LoadedModel m;
  m.solution = solution_from_json(j);
  const json cfg = j.value("config", json::object());
  const std::string data_path = c.data_path.empty() ? cfg.value("data_path", std::string()) : c.data_path;
  const std::string target = c.target_column.empty() ? cfg.value("target_column", std::string()) : c.target_column;
  if (data_path.empty() || target.empty()) throw InputError("model does not record its data; pass --data and --target");
  const Dataset raw = load_csv(data_path, target, m.solution.task);
  m.data = standardize(raw).first;
  if (j.contains("column_names") && j.at("column_names").get<std::vector<std::string>>() != m.data.column_names)
    throw DimensionMismatch("data columns do not match the columns the model was fitted on");
  if (m.data.p() != m.solution.beta.size())
    throw DimensionMismatch("model has " + std::to_string(m.solution.beta.size()) + " coefficients but data has " +
                            std::to_string(m.data.p()) + " columns");
  return m;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

int cmd_fit(const RunConfig& c, std::ostream& out) {
  if (c.data_path.empty() || c.target_column.empty()) throw InputError("fit needs --data and --target");
  const Task task = task_from_string(c.task);
  const Dataset raw = load_csv(c.data_path, c.target_column, task);
  const auto [data, stats] = standardize(raw);

  json doc;
  double lambda = 0.0;
  if (const auto fixed = parse_lambda(c.lambda_spec)) {
    lambda = *fixed;
  } else {
    const auto grid = lambda_grid(kGridMinExponent, kGridMaxExponent, kGridStepExponent);
    const CvResult cv = tune_lambda_cv(data, grid, c.folds, c.seed);
    lambda = cv.lambda_star;
    json scores = json::array();
    for (double s : cv.cv_scores) {
      if (std::isfinite(s))
        scores.push_back(s);
      else
        scores.push_back(nullptr);
    }
    doc["cv"] = {{"grid", grid}, {"scores", scores}, {"score", task == Task::Classification ? "auc" : "mae"}};
  }

  const LassoSolution sol = fit_reference(data.X, data.y, lambda, default_reference_ridge(lambda), task);

  json body = solution_to_json(sol, data.column_names);
  doc.update(body);
  doc["config"] = config_json(c);
  doc["standardization"] = {{"column_means", vector_json(stats.column_means)},
                            {"column_sds", vector_json(stats.column_sds)},
                            {"y_mean", stats.y_mean},
                            {"dropped_columns", stats.dropped_columns}};
  const VectorXd beta_orig = sol.beta.cwiseQuotient(stats.column_sds);
  const double intercept_orig = (task == Task::Regression ? stats.y_mean : 0.0) + sol.intercept -
                                beta_orig.dot(stats.column_means);
  doc["original_scale"] = {{"beta", vector_json(beta_orig)}, {"intercept", intercept_orig}};
  if (task == Task::Classification) doc["class_labels"] = data.class_labels;
  write_json(c.output_path, doc);

  out << "lambda* = " << fmt(lambda) << "\n";
  out << "|E| = " << sol.support.size() << "\n";
  out << "objective = " << fmt(sol.objective) << "\n";
  return kExitOk;
}

int cmd_enumerate(const RunConfig& c, std::ostream& out) {
  const LoadedModel m = load_model(c);
  const LassoSolution& ref = m.solution;
  const Metric metric = c.metric == "auto" ? default_metric(ref.task) : metric_from_string(c.metric);
  if (metric == Metric::Deviance && ref.task == Task::Regression)
    throw InputError("--metric deviance needs a classification model");

  EnumerationOptions opts;
  opts.strict_break = c.strict_break;
  opts.dim_cap = static_cast<Index>(c.dim_cap);
  const EquivalentSolutionSet set =
      c.strong ? enumerate_strong(ref, m.data.X, m.data.y, opts)
               : enumerate_relaxed(ref, metric, c.tol, static_cast<Index>(c.d_max), m.data.X, m.data.y, opts);

  const auto e = static_cast<Index>(ref.support.size());
  const double rmse_ref = evaluate_metric(Metric::Rmse, ref.beta, ref.intercept, m.data.X, m.data.y);
  const double rmse_b = rmse_bound(set.box_halfwidth, set.sigma_bar, e, m.data.n(), rmse_ref);
  std::optional<double> dev_b;
  if (ref.task == Task::Classification) {
    const double dev_ref = evaluate_metric(Metric::Deviance, ref.beta, ref.intercept, m.data.X, m.data.y);
    dev_b = dev_bound(set.box_halfwidth, set.sigma_bar, e, m.data.n(), dev_ref);
  }

  double lo = set.reference_metric, hi = set.reference_metric;
  for (const auto& s : set.solutions) {
    lo = std::min(lo, s.metric_value);
    hi = std::max(hi, s.metric_value);
  }

  json doc = solution_set_to_json(set);
  doc["config"] = config_json(c);
  doc["column_names"] = m.data.column_names;
  doc["bounds"] = {{"rmse", rmse_b}, {"deviance", dev_b ? json(*dev_b) : json(nullptr)}};
  doc["mode"] = c.strong ? "strong" : "relaxed";
  write_json(c.output_path, doc);

  out << "solutions = " << set.solutions.size() << "\n";
  out << "i*_final = " << set.i_star_final << "\n";
  out << "metric " << to_string(set.metric) << " in [" << fmt(lo) << ", " << fmt(hi) << "], reference "
      << fmt(set.reference_metric) << "\n";
  out << "bound rmse = " << fmt(rmse_b);
  if (dev_b) out << ", bound deviance = " << fmt(*dev_b);
  out << "\n";
  return kExitOk;
}

int cmd_categorize(const RunConfig& c, std::ostream& out) {
  const LoadedModel m = load_model(c);
  const std::optional<Index> i_star = parse_istar(c.i_star);
  const SpectralData spectral = thin_svd(select_columns(m.data.X, m.solution.support));
  const std::vector<VariableBound> bounds = categorize_variables(m.solution, spectral, i_star);
  if (c.output_path.empty()) throw InputError("--out is required");
  if (std::filesystem::path(c.output_path).extension() == ".json") {
    json doc;
    doc["bounds"] = bounds_to_json(bounds, m.data.column_names);
    doc["config"] = config_json(c);
    write_json(c.output_path, doc);
  } else {
    write_file_atomic(c.output_path, bounds_to_csv(bounds, m.data.column_names));
  }

  const auto replaceable =
      std::count_if(bounds.begin(), bounds.end(), [](const VariableBound& b) { return b.category == Category::Dispensable; });
  out << "replaceable = " << replaceable << "\n";
  out << "indispensable = " << static_cast<long>(bounds.size()) - replaceable << "\n";
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  if (c.solutions_path.empty()) throw InputError("report needs --solutions");
  const json solutions = read_json_file(c.solutions_path);
  const std::vector<IndexSet> supports = supports_from_json(solutions);

  std::vector<double> scores;
  if (!c.scores_path.empty()) {
    std::ifstream f(c.scores_path);
    if (!f) throw InputError("cannot open '" + c.scores_path + "'");
    std::string token;
    while (f >> token) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size())
        throw InputError("'" + c.scores_path + "': not a number: '" + token + "'");
      scores.push_back(v);
    }
  }
  const SignatureReport report =
      c.scores_path.empty() ? signature_report(supports) : signature_report(supports, std::span<const double>(scores));

  json doc = report_to_json(report);
  doc["config"] = config_json(c);
  write_json(c.output_path, doc);

  out << "signatures = " << report.n_signatures << "\n";
  for (const auto& g : report.groups) {
    out << "size " << g.signature_size << ": count " << g.count;
    if (g.mean_jaccard) out << ", mean jaccard " << fmt(*g.mean_jaccard);
    if (g.mean_solution_specific) out << ", mean specific " << fmt(*g.mean_solution_specific);
    out << "\n";
  }
  if (report.cov_size) out << "cov size = " << fmt(*report.cov_size) << "\n";
  if (report.cov_performance) out << "cov performance = " << fmt(*report.cov_performance) << "\n";
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Lasso fitting and equivalent-solution enumeration", "lassoeq"};
  app.require_subcommand(1);

  auto add_data = [&](CLI::App* s, bool required) {
    auto* d = s->add_option("--data", c.data_path, "CSV file with a header row");
    auto* t = s->add_option("--target", c.target_column, "Target column name");
    if (required) {
      d->required();
      t->required();
    }
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", c.output_path, "Output file")->required(); };
  auto add_model = [&](CLI::App* s) { s->add_option("--model", c.model_path, "Model JSON written by fit")->required(); };

  auto* fit = app.add_subcommand("fit", "Tune lambda and fit the reference model");
  add_data(fit, true);
  fit->add_option("--task", c.task, "regression or classification")->capture_default_str();
  fit->add_option("--lambda", c.lambda_spec, "auto or a positive number")->capture_default_str();
  fit->add_option("--folds", c.folds, "Cross-validation folds")->capture_default_str();
  fit->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  add_out(fit);

  auto* en = app.add_subcommand("enumerate", "Enumerate equivalent solutions of a fitted model");
  add_model(en);
  add_data(en, false);
  en->add_option("--tol", c.tol, "Relative metric tolerance")->capture_default_str();
  en->add_option("--dmax", c.d_max, "Maximum number of relaxed directions")->capture_default_str();
  en->add_option("--metric", c.metric, "auto, rmse or deviance")->capture_default_str();
  en->add_flag("--strict-break", c.strict_break, "Keep only fully passing relaxation levels");
  en->add_option("--dim-cap", c.dim_cap, "Largest polytope dimension to enumerate")->capture_default_str();
  en->add_flag("--strong", c.strong, "Enumerate the strong-equivalence polytope instead");
  en->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  add_out(en);

  auto* cat = app.add_subcommand("categorize", "Coefficient ranges and variable categories");
  add_model(cat);
  add_data(cat, false);
  cat->add_option("--istar", c.i_star, "strong or the number of retained directions")->capture_default_str();
  cat->add_option("--out", c.output_path, "Output file (CSV, or JSON when it ends in .json)")->required();

  auto* rep = app.add_subcommand("report", "Signature heterogeneity statistics");
  rep->add_option("--solutions", c.solutions_path, "Solution-set JSON written by enumerate")->required();
  rep->add_option("--scores", c.scores_path, "Hold-out scores, one per solution");
  add_out(rep);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    validate(c);
    if (fit->parsed()) return cmd_fit(c, out);
    if (en->parsed()) return cmd_enumerate(c, out);
    if (cat->parsed()) return cmd_categorize(c, out);
    return cmd_report(c, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace lassoeq::cli
