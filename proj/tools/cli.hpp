#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace lassoeq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Every knob of a pipeline run. Unset paths are empty strings.
struct RunConfig {
  std::string data_path;
  std::string target_column;
  std::string task = "regression";
  std::string lambda_spec = "auto";
  double tol = 0.01;
  long d_max = 12;
  std::string i_star = "strong";
  int folds = 5;
  std::uint64_t seed = 0;
  std::string metric = "auto";
  std::string output_path;
  bool strict_break = false;
  long dim_cap = 20;

  std::string model_path;
  std::string solutions_path;
  std::string scores_path;
  bool strong = false;
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_enumerate(const RunConfig& config, std::ostream& out);
int cmd_categorize(const RunConfig& config, std::ostream& out);
int cmd_report(const RunConfig& config, std::ostream& out);

}  // namespace lassoeq::cli
