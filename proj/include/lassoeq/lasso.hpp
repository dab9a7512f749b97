#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lassoeq/dataset.hpp"

namespace lassoeq {

/// Coefficients with magnitude at or below this are treated as exact zeros.
inline constexpr double kSupportThreshold = 1e-10;

/// A fitted (logistic-)Lasso model in standardized units.
///
/// `support` holds the strictly increasing indices of the nonzero
/// coefficients and `signs` their signs. Regression fits have no intercept
/// (targets are centered upstream); classification fits carry an unpenalized
/// intercept. `objective` is the penalized objective without any ridge term:
/// 0.5*||y - X beta||^2 + lambda*||beta||_1, or for classification the
/// summed logistic deviance plus lambda*||beta||_1.
struct LassoSolution {
  Eigen::VectorXd beta;
  double intercept = 0.0;
  double lambda = 0.0;
  std::vector<Eigen::Index> support;
  std::vector<int> signs;
  double objective = 0.0;
  Task task = Task::Regression;

  /// Coefficients restricted to the support, in support order.
  Eigen::VectorXd beta_support() const;
  Eigen::VectorXd signs_vector() const;
};

/// log(1 + exp(x)) without overflow.
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

struct SolverOptions {
  /// Stop when the largest coordinate change in a sweep drops below this.
  double tolerance = 1e-8;
  long max_sweeps = 100000;
};

/// Builds a solution from raw coefficients: tiny entries are zeroed and the
/// support and signs are derived. The objective is recomputed from X and y.
LassoSolution make_solution(Eigen::VectorXd beta, double intercept, double lambda, Task task,
                            const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

double lasso_objective(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       double lambda);

/// Summed logistic deviance sum_i [-y_i eta_i + log(1 + exp(eta_i))], eta = intercept + X beta.
double logistic_loss(const Eigen::VectorXd& beta, double intercept, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y);

double logistic_objective(const Eigen::VectorXd& beta, double intercept, const Eigen::MatrixXd& X,
                          const Eigen::VectorXd& y, double lambda);

/// Smallest lambda at which the all-zero coefficient vector is optimal.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task);

LassoSolution fit_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                        const SolverOptions& opts = {});

LassoSolution fit_logistic_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                                 const SolverOptions& opts = {});

/// Largest violation of the Lasso optimality conditions at `sol`.
double kkt_check(const LassoSolution& sol, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                 double lambda);

/// Default ridge used for the maximal-support reference fit.
inline double default_reference_ridge(double lambda) { return 1e-6 * lambda; }

/// Elastic-net fit with a small ridge term 0.5*ridge*||beta||^2. The ridge
/// makes the problem strictly convex, so the solution is unique and spreads
/// weight across collinear columns; its support is used as the maximal
/// (equicorrelation) support of the Lasso problem.
LassoSolution fit_reference(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, double ridge,
                            Task task = Task::Regression, const SolverOptions& opts = {});

/// Fits whichever of fit_lasso / fit_logistic_lasso matches `task`.
LassoSolution fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda, Task task,
                  const SolverOptions& opts = {});

/// Area under the ROC curve of `scores` against 0/1 `labels`; ties count half.
double auc(std::span<const double> scores, std::span<const double> labels);

struct CvResult {
  double lambda_star = 0.0;
  /// Mean fold score per grid entry: AUC for classification, MAE for regression.
  std::vector<double> cv_scores;
};

/// K-fold cross-validated choice of lambda. Classification folds are
/// stratified and scored by AUC (maximized); regression folds are scored by
/// MAE (minimized). Ties go to the smaller lambda.
CvResult tune_lambda_cv(const Dataset& d, std::span<const double> grid, int folds, std::uint64_t seed,
                        const SolverOptions& opts = {});

}  // namespace lassoeq
