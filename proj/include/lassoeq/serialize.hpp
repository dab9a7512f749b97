#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lassoeq/categorize.hpp"
#include "lassoeq/equivalence.hpp"
#include "lassoeq/lasso.hpp"
#include "lassoeq/report.hpp"

namespace lassoeq {

/// {"lambda", "intercept", "beta", "support", "signs", "task", "objective", "column_names"}
nlohmann::json solution_to_json(const LassoSolution& sol, const std::vector<std::string>& column_names);
LassoSolution solution_from_json(const nlohmann::json& j);

/// {"metric", "tol", "i_star_final", "reference_metric",
///  "solutions": [{"beta", "support", "metric_value"}], ...}
nlohmann::json solution_set_to_json(const EquivalentSolutionSet& set);

/// Support lists of the "solutions" array of a solution-set document.
std::vector<IndexSet> supports_from_json(const nlohmann::json& j);

/// Mirrors the size-grouped signature table; absent statistics become null.
nlohmann::json report_to_json(const SignatureReport& report);

/// index,name,lower,upper,category
std::string bounds_to_csv(const std::vector<VariableBound>& bounds, const std::vector<std::string>& column_names);

/// [{"index", "name", "lower", "upper", "category", "dispensable"}]
nlohmann::json bounds_to_json(const std::vector<VariableBound>& bounds, const std::vector<std::string>& column_names);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

/// Writes via a sibling temporary file and a rename, so readers never see a
/// partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace lassoeq
