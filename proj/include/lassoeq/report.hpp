#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lassoeq/equivalence.hpp"

namespace lassoeq {

using IndexSet = std::vector<Eigen::Index>;

/// |a and b| / |a or b|; two empty sets count as identical (1.0).
double jaccard(const IndexSet& a, const IndexSet& b);

/// Size of the symmetric difference.
Eigen::Index solution_specific_count(const IndexSet& a, const IndexSet& b);

/// Sample standard deviation (n-1) over the mean. Throws TooFew for fewer
/// than two values and ZeroMean when the mean is zero.
double coefficient_of_variation(std::span<const double> values);

struct SignatureGroup {
  Eigen::Index signature_size = 0;
  Eigen::Index count = 0;
  /// Pairwise averages within the group; empty for single-member groups.
  std::optional<double> mean_jaccard;
  std::optional<double> mean_solution_specific;
};

struct SignatureReport {
  std::vector<SignatureGroup> groups;  // ascending signature size
  std::optional<double> cov_performance;
  std::optional<double> cov_size;
  Eigen::Index n_signatures = 0;
};

/// Groups signatures by size and summarizes within-group heterogeneity.
/// `holdout_scores`, when given, must have one entry per signature.
SignatureReport signature_report(const std::vector<IndexSet>& signatures,
                                 std::optional<std::span<const double>> holdout_scores = std::nullopt);

SignatureReport signature_report(const EquivalentSolutionSet& solutions,
                                 std::optional<std::span<const double>> holdout_scores = std::nullopt);

}  // namespace lassoeq
