#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lassoeq/lasso.hpp"
#include "lassoeq/lp.hpp"
#include "lassoeq/polytope.hpp"
#include "lassoeq/spectral.hpp"

namespace lassoeq {

/// A variable is dispensable (reported as "replaceable") when some
/// equivalent solution sets it to zero, indispensable otherwise.
enum class Category { Dispensable, Indispensable };

/// "replaceable" or "indispensable".
std::string_view label(Category c);

inline constexpr double kZeroMembershipTol = 1e-10;

struct VariableBound {
  Eigen::Index index = 0;
  double lower = 0.0;
  double upper = 0.0;
  Category category = Category::Indispensable;
};

Category categorize(double lower, double upper);

/// Optimizes objective^T x over P (minimizes unless `maximize`). Throws
/// Infeasible / Unbounded.
LpSolution solve_lp(const Eigen::VectorXd& objective, const Polytope& P, bool maximize);

/// Range of coordinate i over P via two linear programs. `index` in the
/// result is i.
VariableBound coef_range(const Polytope& P, Eigen::Index i);

VariableBound coef_range_strong(Eigen::Index i, const Eigen::MatrixXd& X_E, const Eigen::VectorXd& beta_E,
                                const Eigen::VectorXd& s);

VariableBound coef_range_relaxed(Eigen::Index i, const Eigen::MatrixXd& V_star, const Eigen::VectorXd& beta_E,
                                 const Eigen::VectorXd& s, double l);

/// One bound per support index of `ref`, in index order; `index` holds the
/// predictor index. `i_star == nullopt` selects strong equivalence (the
/// numerical-rank singular directions, no box); otherwise the first i_star
/// directions are kept and the box halfwidth is ||beta_hat||_inf.
std::vector<VariableBound> categorize_variables(const LassoSolution& ref, const SpectralData& spectral,
                                                std::optional<Eigen::Index> i_star);

}  // namespace lassoeq
