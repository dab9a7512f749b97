#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lassoeq/dataset.hpp"
#include "lassoeq/equivalence.hpp"
#include "lassoeq/polytope.hpp"

namespace lassoeq::testkit {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Standardized regression data: y = X beta* + noise with `signal` nonzero
/// coefficients of magnitude 1..2.
Dataset random_regression(Eigen::Index n, Eigen::Index p, std::uint64_t seed, Eigen::Index signal = 3,
                          double noise = 0.5);

/// Standardized logistic data with both classes present.
Dataset random_classification(Eigen::Index n, Eigen::Index p, std::uint64_t seed, Eigen::Index signal = 2);

/// Raw (unstandardized) regression data whose first `copies` columns are
/// identical, followed by two independent signal columns and one noise
/// column. Column names: a, a_copy1, ..., b, c, noise; target "y".
Dataset replicated_column_data(int copies, std::uint64_t seed, Eigen::Index n = 40);

void write_csv(const std::filesystem::path& path, const Dataset& d, const std::string& target = "y");

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

// Oracles. They share no code with the library solvers.

/// Lasso by projected gradient on the split form beta = u - v, u, v >= 0,
/// run until the objective changes by less than `tol`.
Eigen::VectorXd lasso_projected_gradient(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                                         double tol = 1e-14, long max_iter = 5000000);

double lasso_objective_direct(const Eigen::VectorXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                              double lambda);

struct LogisticOracle {
  Eigen::Vector2d beta;
  double intercept = 0.0;
  double objective = 0.0;
};

/// Two-coefficient logistic Lasso by refined grid search over the
/// coefficient plane; the intercept is profiled out by 1-D Newton.
LogisticOracle logistic_grid_oracle(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

/// Summed logistic loss plus lambda * ||beta||_1, computed directly.
double logistic_objective_direct(const Eigen::VectorXd& beta, double b0, const Eigen::MatrixXd& X,
                                 const Eigen::VectorXd& y, double lambda);

/// Min and max of coordinate i over a vertex list.
std::pair<double, double> vertex_scan_range(const std::vector<Eigen::VectorXd>& vertices, Eigen::Index i);

/// Set equality of point lists under L-inf distance `tol`.
bool same_point_set(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b, double tol);

/// Random polytope with a feasible interior point, a box, and reduced
/// dimension at most `max_reduced`.
Polytope random_bounded_polytope(std::mt19937_64& rng, Eigen::Index max_reduced);

/// Direct metric evaluation for the replay oracle.
double metric_direct(Metric metric, const Eigen::VectorXd& beta, double intercept, const Eigen::MatrixXd& X,
                     const Eigen::VectorXd& y);

/// Replays the relaxation loop with brute_force_vertices in place of the
/// fast enumerator and returns the sorted, deduplicated solution betas.
std::vector<Eigen::VectorXd> replay_relaxed(const LassoSolution& ref, Metric metric, double tol, Eigen::Index d_max,
                                            const Eigen::MatrixXd& X, const Eigen::VectorXd& y, bool strict_break);

std::vector<Eigen::VectorXd> solution_betas(const EquivalentSolutionSet& set);

}  // namespace lassoeq::testkit
