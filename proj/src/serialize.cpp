#include "lassoeq/serialize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lassoeq/errors.hpp"

namespace lassoeq {

using Eigen::Index;
using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("JSON document is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(std::string("JSON field '") + key + "' has the wrong type: " + e.what());
  }
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

json solution_to_json(const LassoSolution& sol, const std::vector<std::string>& column_names) {
  json j;
  j["lambda"] = sol.lambda;
  j["intercept"] = sol.intercept;
  j["beta"] = vector_to_json(sol.beta);
  j["support"] = sol.support;
  j["signs"] = sol.signs;
  j["task"] = std::string(to_string(sol.task));
  j["objective"] = sol.objective;
  j["column_names"] = column_names;
  return j;
}

LassoSolution solution_from_json(const json& j) {
  LassoSolution sol;
  sol.lambda = get_field<double>(j, "lambda");
  sol.intercept = get_field<double>(j, "intercept");
  const auto beta = get_field<std::vector<double>>(j, "beta");
  sol.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Index>(beta.size()));
  sol.support = get_field<std::vector<Index>>(j, "support");
  sol.signs = get_field<std::vector<int>>(j, "signs");
  sol.task = task_from_string(get_field<std::string>(j, "task"));
  sol.objective = get_field<double>(j, "objective");
  if (sol.signs.size() != sol.support.size()) throw InputError("model JSON: support and signs differ in length");
  for (std::size_t k = 0; k < sol.support.size(); ++k) {
    const Index idx = sol.support[k];
    if (idx < 0 || idx >= sol.beta.size()) throw InputError("model JSON: support index out of range");
    if ((sol.beta[idx] > 0.0 ? 1 : -1) != sol.signs[k] || sol.beta[idx] == 0.0)
      throw InputError("model JSON: signs do not match beta");
  }
  return sol;
}

json solution_set_to_json(const EquivalentSolutionSet& set) {
  json j;
  j["metric"] = std::string(to_string(set.metric));
  j["tol"] = set.tol;
  j["i_star_final"] = set.i_star_final;
  j["reference_metric"] = set.reference_metric;
  j["box_halfwidth"] = set.box_halfwidth;
  j["sigma_bar"] = vector_to_json(set.sigma_bar);
  json sols = json::array();
  for (const auto& s : set.solutions) {
    json e;
    e["beta"] = vector_to_json(s.beta);
    e["support"] = s.support;
    e["metric_value"] = s.metric_value;
    sols.push_back(std::move(e));
  }
  j["solutions"] = std::move(sols);
  json steps = json::array();
  for (const auto& st : set.steps)
    steps.push_back({{"i_star", st.i_star}, {"n_vertices", st.n_vertices}, {"n_equivalent", st.n_equivalent}});
  j["steps"] = std::move(steps);
  return j;
}

std::vector<IndexSet> supports_from_json(const json& j) {
  if (!j.contains("solutions") || !j.at("solutions").is_array())
    throw InputError("solution-set JSON has no 'solutions' array");
  std::vector<IndexSet> out;
  for (const auto& s : j.at("solutions")) out.push_back(get_field<IndexSet>(s, "support"));
  return out;
}

json report_to_json(const SignatureReport& report) {
  json j;
  j["n_signatures"] = report.n_signatures;
  json groups = json::array();
  for (const auto& g : report.groups) {
    groups.push_back({{"signature_size", g.signature_size},
                      {"count", g.count},
                      {"mean_jaccard", optional_to_json(g.mean_jaccard)},
                      {"mean_solution_specific", optional_to_json(g.mean_solution_specific)}});
  }
  j["groups"] = std::move(groups);
  j["cov_performance"] = optional_to_json(report.cov_performance);
  j["cov_size"] = optional_to_json(report.cov_size);
  return j;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string bounds_to_csv(const std::vector<VariableBound>& bounds, const std::vector<std::string>& column_names) {
  std::ostringstream out;
  out << "index,name,lower,upper,category\n";
  for (const auto& b : bounds) {
    std::string name = b.index < static_cast<Index>(column_names.size())
                           ? column_names[static_cast<std::size_t>(b.index)]
                           : std::to_string(b.index);
    if (name.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : name) {
        if (c == '"') quoted.push_back('"');
        quoted.push_back(c);
      }
      name = quoted + "\"";
    }
    out << b.index << ',' << name << ',' << format_double(b.lower) << ',' << format_double(b.upper) << ','
        << label(b.category) << '\n';
  }
  return out.str();
}

json bounds_to_json(const std::vector<VariableBound>& bounds, const std::vector<std::string>& column_names) {
  json a = json::array();
  for (const auto& b : bounds) {
    const bool named = b.index < static_cast<Index>(column_names.size());
    a.push_back({{"index", b.index},
                 {"name", named ? column_names[static_cast<std::size_t>(b.index)] : std::to_string(b.index)},
                 {"lower", b.lower},
                 {"upper", b.upper},
                 {"category", std::string(label(b.category))},
                 {"dispensable", b.category == Category::Dispensable}});
  }
  return a;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace lassoeq
