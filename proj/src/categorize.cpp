#include "lassoeq/categorize.hpp"

#include "lassoeq/errors.hpp"

namespace lassoeq {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view label(Category c) { return c == Category::Dispensable ? "replaceable" : "indispensable"; }

Category categorize(double lower, double upper) {
  return (lower - kZeroMembershipTol <= 0.0 && 0.0 <= upper + kZeroMembershipTol) ? Category::Dispensable
                                                                                     : Category::Indispensable;
}

LpSolution solve_lp(const VectorXd& objective, const Polytope& P, bool maximize) {
  if (objective.size() != P.dim()) throw DimensionMismatch("objective length does not match polytope dimension");
  if (!P.consistent()) throw Infeasible("polytope equalities are inconsistent");
  LinearProgram lp;
  lp.cost = maximize ? VectorXd(-objective) : objective;
  lp.A_eq = P.eq_rows();
  lp.b_eq = P.eq_rhs();
  lp.lower = P.lower_bounds();
  lp.upper = P.upper_bounds();
  LpSolution sol = solve_linear_program(lp);
  sol.value = objective.dot(sol.x);
  return sol;
}

VariableBound coef_range(const Polytope& P, Index i) {
  if (i < 0 || i >= P.dim()) throw IndexOutOfRange("coefficient index out of range");
  const VectorXd e = VectorXd::Unit(P.dim(), i);
  VariableBound b;
  b.index = i;
  b.lower = solve_lp(e, P, false).value;
  b.upper = solve_lp(e, P, true).value;
  b.category = categorize(b.lower, b.upper);
  return b;
}

VariableBound coef_range_strong(Index i, const MatrixXd& X_E, const VectorXd& beta_E, const VectorXd& s) {
  return coef_range(build_strong_polytope(X_E, beta_E, s), i);
}

VariableBound coef_range_relaxed(Index i, const MatrixXd& V_star, const VectorXd& beta_E, const VectorXd& s,
                                 double l) {
  return coef_range(build_relaxed_polytope(V_star, beta_E, s, l), i);
}

std::vector<VariableBound> categorize_variables(const LassoSolution& ref, const SpectralData& spectral,
                                                std::optional<Index> i_star) {
  if (ref.support.empty()) throw EmptySupport("reference solution has an empty support");
  const auto e = static_cast<Index>(ref.support.size());
  if (spectral.dim() != e) throw DimensionMismatch("spectral data does not match the reference support");
  const VectorXd beta_E = ref.beta_support();
  const VectorXd s = ref.signs_vector();

  std::optional<Polytope> P;
  if (!i_star) {
    const MatrixXd V_plus = spectral.V.leftCols(spectral.rank);
    P.emplace(V_plus.transpose(), V_plus.transpose() * beta_E, s, std::nullopt,
              std::max(1.0, beta_E.lpNorm<Eigen::Infinity>()));
  } else {
    const Restriction r = restriction_matrix(spectral, *i_star);
    P.emplace(build_relaxed_polytope(r.V_star, beta_E, s, ref.beta.lpNorm<Eigen::Infinity>()));
  }

  std::vector<VariableBound> out;
  out.reserve(ref.support.size());
  for (Index k = 0; k < e; ++k) {
    VariableBound b = coef_range(*P, k);
    b.index = ref.support[static_cast<std::size_t>(k)];
    out.push_back(b);
  }
  return out;
}

}  // namespace lassoeq
