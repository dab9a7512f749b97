#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lassoeq {

enum class Task { Regression, Classification };

std::string_view to_string(Task task);
Task task_from_string(std::string_view name);

/// Design matrix plus target. Rows are samples, columns are predictors.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  Task task = Task::Regression;
  /// Original target labels for classification, in 0/1 order.
  std::vector<std::string> class_labels;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

/// Per-column statistics for the retained columns, plus the names of the
/// zero-variance columns that were dropped.
struct StandardizationStats {
  Eigen::VectorXd column_means;
  Eigen::VectorXd column_sds;
  double y_mean = 0.0;
  std::vector<std::string> dropped_columns;
};

/// Throws InputError subclasses when the dataset invariants do not hold.
void validate(const Dataset& d);

Dataset load_csv(const std::filesystem::path& path, std::string_view target_column, Task task);

/// Centers and scales every column to unit sample standard deviation (n-1
/// denominator). Zero-variance columns are dropped. Regression targets are
/// centered; classification targets are left alone.
std::pair<Dataset, StandardizationStats> standardize(const Dataset& d);

/// Row subset, preserving order.
Dataset take_rows(const Dataset& d, const std::vector<Eigen::Index>& rows);

/// Stratified (classification) or plain (regression) random split. The first
/// part receives round(fraction * count) rows of each class.
std::pair<Dataset, Dataset> stratified_split(const Dataset& d, double fraction, std::uint64_t seed);

/// 10^(min + k*step) for k = 0..floor((max-min)/step).
std::vector<double> lambda_grid(double min_exponent, double max_exponent, double step_exponent);

/// Deterministic Fisher-Yates shuffle over mt19937_64. std::shuffle is not
/// portable across standard libraries, so the CLI output would not be either.
void deterministic_shuffle(std::vector<Eigen::Index>& v, std::uint64_t seed);

}  // namespace lassoeq
