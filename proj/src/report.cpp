#include "lassoeq/report.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>

#include "lassoeq/errors.hpp"

namespace lassoeq {

using Eigen::Index;

namespace {

IndexSet sorted_unique(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

std::pair<Index, Index> intersection_union(const IndexSet& a, const IndexSet& b) {
  const IndexSet sa = sorted_unique(a), sb = sorted_unique(b);
  IndexSet common;
  std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
  const auto inter = static_cast<Index>(common.size());
  return {inter, static_cast<Index>(sa.size() + sb.size()) - inter};
}

// CoV that reports "absent" instead of throwing.
std::optional<double> try_cov(std::span<const double> values) {
  try {
    return coefficient_of_variation(values);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

}  // namespace

double jaccard(const IndexSet& a, const IndexSet& b) {
  const auto [inter, uni] = intersection_union(a, b);
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Index solution_specific_count(const IndexSet& a, const IndexSet& b) {
  const auto [inter, uni] = intersection_union(a, b);
  return uni - inter;
}

double coefficient_of_variation(std::span<const double> values) {
  if (values.size() < 2) throw TooFew("coefficient of variation needs at least two values");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (mean == 0.0) throw ZeroMean("coefficient of variation is undefined for a zero mean");
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1)) / mean;
}

SignatureReport signature_report(const std::vector<IndexSet>& signatures,
                                 std::optional<std::span<const double>> holdout_scores) {
  if (signatures.empty()) throw InputError("signature report needs at least one signature");
  if (holdout_scores && holdout_scores->size() != signatures.size())
    throw DimensionMismatch("holdout scores must have one entry per signature");

  std::map<Index, std::vector<const IndexSet*>> by_size;
  std::vector<double> sizes;
  for (const auto& s : signatures) {
    const auto k = static_cast<Index>(sorted_unique(s).size());
    by_size[k].push_back(&s);
    sizes.push_back(static_cast<double>(k));
  }

  SignatureReport report;
  report.n_signatures = static_cast<Index>(signatures.size());
  for (const auto& [size, members] : by_size) {
    SignatureGroup g;
    g.signature_size = size;
    g.count = static_cast<Index>(members.size());
    if (members.size() >= 2) {
      double jac = 0.0, spec = 0.0, pairs = 0.0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          jac += jaccard(*members[i], *members[j]);
          spec += static_cast<double>(solution_specific_count(*members[i], *members[j]));
          pairs += 1.0;
        }
      }
      g.mean_jaccard = jac / pairs;
      g.mean_solution_specific = spec / pairs;
    }
    report.groups.push_back(g);
  }
  report.cov_size = try_cov(sizes);
  if (holdout_scores) report.cov_performance = try_cov(*holdout_scores);
  return report;
}

SignatureReport signature_report(const EquivalentSolutionSet& solutions,
                                 std::optional<std::span<const double>> holdout_scores) {
  std::vector<IndexSet> sigs;
  sigs.reserve(solutions.solutions.size());
  for (const auto& s : solutions.solutions) sigs.push_back(s.support);
  return signature_report(sigs, holdout_scores);
}

}  // namespace lassoeq
