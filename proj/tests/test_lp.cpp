#include <limits>

#include <gtest/gtest.h>

#include "lassoeq/categorize.hpp"
#include "lassoeq/errors.hpp"
#include "lassoeq/lp.hpp"
#include "support.hpp"

using namespace lassoeq;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Polytope unit_square() {
  return Polytope(MatrixXd(0, 2), VectorXd(0), VectorXd::Ones(2), Box{VectorXd::Constant(2, 0.5), 0.5});
}

Polytope simplex3() {
  return Polytope(MatrixXd::Ones(1, 3), VectorXd::Ones(1), VectorXd::Ones(3), std::nullopt);
}

}  // namespace

TEST(SolveLp, MaxOverSquare) {
  const LpSolution s = solve_lp((VectorXd(2) << 1, 0).finished(), unit_square(), true);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
}

TEST(SolveLp, MinOverSimplex) {
  const LpSolution s = solve_lp((VectorXd(3) << 1, 0, 0).finished(), simplex3(), false);
  EXPECT_NEAR(s.value, 0.0, 1e-12);
  EXPECT_NEAR(s.x.sum(), 1.0, 1e-12);
}

TEST(SolveLp, MaxOverSimplexPicksVertex) {
  const LpSolution s = solve_lp((VectorXd(3) << 1, 3, 2).finished(), simplex3(), true);
  EXPECT_NEAR(s.value, 3.0, 1e-12);
  EXPECT_NEAR(s.x[1], 1.0, 1e-12);
}

TEST(SolveLp, MatchesVertexScanOnRandomPolytopes) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    const Polytope P = testkit::random_bounded_polytope(rng, 4);
    const auto vertices = brute_force_vertices(P);
    if (vertices.empty()) continue;
    const VectorXd c = testkit::gaussian_matrix(P.dim(), 1, rng);
    double lo = kInf, hi = -kInf;
    for (const auto& v : vertices) {
      lo = std::min(lo, c.dot(v));
      hi = std::max(hi, c.dot(v));
    }
    EXPECT_NEAR(solve_lp(c, P, false).value, lo, 1e-8);
    EXPECT_NEAR(solve_lp(c, P, true).value, hi, 1e-8);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(SolveLp, InfeasibleEqualities) {
  MatrixXd A(2, 2);
  A << 1, 1, 1, 1;
  const Polytope P(A, (VectorXd(2) << 1, 2).finished(), VectorXd::Ones(2), std::nullopt);
  EXPECT_THROW(solve_lp(VectorXd::Ones(2), P, false), Infeasible);
}

TEST(SolveLp, InfeasibleSigns) {
  // x1 + x2 = -1 with both coordinates nonnegative.
  const Polytope P(MatrixXd::Ones(1, 2), (VectorXd(1) << -1).finished(), VectorXd::Ones(2), std::nullopt);
  EXPECT_THROW(solve_lp(VectorXd::Ones(2), P, false), Infeasible);
}

TEST(SolveLp, UnboundedDirection) {
  // x1 - x2 = 0, x >= 0: the ray (t, t) is unbounded above.
  const Polytope P((MatrixXd(1, 2) << 1, -1).finished(), VectorXd::Zero(1), VectorXd::Ones(2), std::nullopt);
  EXPECT_THROW(solve_lp(VectorXd::Ones(2), P, true), Unbounded);
  EXPECT_NEAR(solve_lp(VectorXd::Ones(2), P, false).value, 0.0, 1e-12);
}

TEST(SolveLp, DimensionMismatch) {
  EXPECT_THROW(solve_lp(VectorXd::Ones(3), unit_square(), true), DimensionMismatch);
}

TEST(LinearProgram, FreeAndMirroredVariables) {
  // min x0 - x1 s.t. x0 + x1 = 1, x0 free, -2 <= x1 <= 0.
  LinearProgram lp;
  lp.cost = (VectorXd(2) << 1, -1).finished();
  lp.A_eq = MatrixXd::Ones(1, 2);
  lp.b_eq = VectorXd::Ones(1);
  lp.lower = (VectorXd(2) << -kInf, -2).finished();
  lp.upper = (VectorXd(2) << kInf, 0).finished();
  const LpSolution s = solve_linear_program(lp);
  EXPECT_NEAR(s.x[0], 1.0, 1e-12);
  EXPECT_NEAR(s.x[1], 0.0, 1e-12);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
}

TEST(LinearProgram, DegenerateProblemTerminates) {
  // Many constraints tight at the optimum; Bland's rule must not cycle.
  LinearProgram lp;
  lp.cost = (VectorXd(4) << -0.75, 150, -0.02, 6).finished();
  lp.A_eq = MatrixXd(3, 7);
  lp.A_eq << 0.25, -60, -0.04, 9, 1, 0, 0,  //
      0.5, -90, -0.02, 3, 0, 1, 0,          //
      0, 0, 1, 0, 0, 0, 1;
  lp.cost.conservativeResize(7);
  lp.cost.tail(3).setZero();
  lp.b_eq = (VectorXd(3) << 0, 0, 1).finished();
  lp.lower = VectorXd::Zero(7);
  lp.upper = VectorXd::Constant(7, kInf);
  const LpSolution s = solve_linear_program(lp);
  EXPECT_NEAR(s.value, -0.05, 1e-10);
}

TEST(LinearProgram, NoEqualities) {
  LinearProgram lp;
  lp.cost = (VectorXd(2) << 1, -1).finished();
  lp.A_eq = MatrixXd(0, 2);
  lp.b_eq = VectorXd(0);
  lp.lower = (VectorXd(2) << -1, -1).finished();
  lp.upper = (VectorXd(2) << 2, 3).finished();
  const LpSolution s = solve_linear_program(lp);
  EXPECT_NEAR(s.value, -4.0, 1e-12);
}
