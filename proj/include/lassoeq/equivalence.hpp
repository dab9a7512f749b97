#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lassoeq/lasso.hpp"
#include "lassoeq/polytope.hpp"

namespace lassoeq {

enum class Metric { Rmse, Deviance };

std::string_view to_string(Metric metric);
Metric metric_from_string(std::string_view name);
/// RMSE for regression, mean deviance for classification.
Metric default_metric(Task task);

/// ||y - X beta||_2 / sqrt(n).
double rmse(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Mean logistic deviance (1/n) sum_i [-y_i eta_i + log(1 + exp(eta_i))]
/// with eta = X beta + intercept.
double deviance(const Eigen::VectorXd& beta, double intercept, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Metric of `beta` with the intercept held at `intercept`. RMSE subtracts
/// the intercept from y (zero for regression fits).
double evaluate_metric(Metric metric, const Eigen::VectorXd& beta, double intercept, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y);

/// Relative slack applied to the (1 + tol) test so that points whose metric
/// equals the reference in exact arithmetic are not rejected over rounding.
inline constexpr double kMetricRoundingSlack = 16.0 * 2.220446049250313e-16;

/// support(beta) within support(ref), and D(beta) <= (1 + tol) D(ref).
bool is_equivalent(const Eigen::VectorXd& beta, const LassoSolution& ref, Metric metric, double tol,
                   const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct EquivalentSolution {
  Eigen::VectorXd beta;
  std::vector<Eigen::Index> support;
  double metric_value = 0.0;
};

/// One pass of the relaxation loop.
struct RelaxationStep {
  Eigen::Index i_star = 0;
  std::size_t n_vertices = 0;
  std::size_t n_equivalent = 0;
};

struct EquivalentSolutionSet {
  LassoSolution reference;
  Metric metric = Metric::Rmse;
  double tol = 0.0;
  /// Number of retained singular directions in the last polytope whose
  /// vertices contributed; every returned solution lies in that polytope.
  Eigen::Index i_star_final = 0;
  std::vector<EquivalentSolution> solutions;
  double reference_metric = 0.0;
  /// Box halfwidth l (0 for the box-free strong polytope).
  double box_halfwidth = 0.0;
  /// Singular values discarded at i_star_final.
  Eigen::VectorXd sigma_bar;
  std::vector<RelaxationStep> steps;
};

struct EnumerationOptions {
  /// Return only the vertices of the last iteration in which every vertex
  /// passed, instead of all passing vertices seen up to the break.
  bool strict_break = false;
  Eigen::Index dim_cap = kDefaultDimCap;
};

inline constexpr double kDefaultTol = 0.01;
inline constexpr Eigen::Index kDefaultDMax = 12;

/// Relaxed enumeration: for i = 1..d_max, drop the equality on the i
/// smallest singular directions of X_E, enumerate the vertices of the
/// resulting box- and sign-constrained polytope, and stop at the first
/// iteration that produces a vertex with D > (1 + tol) D(ref). The
/// reference is always part of the result.
EquivalentSolutionSet enumerate_relaxed(const LassoSolution& ref, Metric metric, double tol, Eigen::Index d_max,
                                        const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                        const EnumerationOptions& opts = {});

/// Vertices of the strong-equivalence polytope of `ref` (which should come
/// from fit_reference so that its support is maximal).
EquivalentSolutionSet enumerate_strong(const LassoSolution& ref, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const EnumerationOptions& opts = {});

/// Columns of X indexed by `cols`.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& cols);

}  // namespace lassoeq
