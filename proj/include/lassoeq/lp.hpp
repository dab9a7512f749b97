#pragma once

#include <Eigen/Dense>

namespace lassoeq {

/// minimize cost^T x  subject to  A_eq x = b_eq,  lower <= x <= upper.
/// Bounds may be infinite. An empty A_eq (0 rows) means no equalities.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LpSolution {
  Eigen::VectorXd x;
  double value = 0.0;
};

/// Dense two-phase simplex with Bland's anti-cycling rule. Returns an optimal
/// basic feasible solution; throws Infeasible or Unbounded.
LpSolution solve_linear_program(const LinearProgram& lp);

}  // namespace lassoeq
