#include "lassoeq/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "lassoeq/errors.hpp"

namespace lassoeq {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;
constexpr long kMaxPivots = 200000;

// How an original variable is written in terms of nonnegative standard-form
// columns: x = offset + sign * u[col]  (or u[col] - u[col + 1] when free).
struct VarMap {
  enum Kind { Shifted, Mirrored, Free } kind;
  Index col;
  double offset;
};

class Tableau {
 public:
  Tableau(MatrixXd t, std::vector<Index> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  MatrixXd& data() { return t_; }
  std::vector<Index>& basis() { return basis_; }

  void pivot(Index r, Index c) {
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  // Runs Bland-rule pivots over the first `allowed` columns. Returns false
  // when the objective is unbounded below.
  bool optimize(Index allowed) {
    const Index m = rows();
    const Index rhs = cols();
    for (long it = 0; it < kMaxPivots; ++it) {
      Index enter = -1;
      for (Index j = 0; j < allowed; ++j) {
        if (t_(m, j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m; ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t_(i, rhs) / a;
        const double tie = 1e-12 * std::max(1.0, std::abs(best));
        if (leave < 0 || ratio < best - tie) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + tie &&
                   basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw NoConvergence("simplex", kMaxPivots);
  }

 private:
  MatrixXd t_;
  std::vector<Index> basis_;
};

}  // namespace

LpSolution solve_linear_program(const LinearProgram& lp) {
  const Index n = lp.cost.size();
  if (lp.lower.size() != n || lp.upper.size() != n || lp.A_eq.rows() != lp.b_eq.size() ||
      (lp.A_eq.rows() > 0 && lp.A_eq.cols() != n))
    throw DimensionMismatch("linear program dimensions disagree");

  // Standard form: min c^T u, A u = b, u >= 0.
  std::vector<VarMap> map(static_cast<std::size_t>(n));
  Index ncols = 0;
  std::vector<Index> boxed;
  for (Index j = 0; j < n; ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    if (lo > hi) throw Infeasible("variable " + std::to_string(j) + " has lower bound above upper bound");
    if (std::isfinite(lo)) {
      map[j] = {VarMap::Shifted, ncols++, lo};
      if (std::isfinite(hi)) boxed.push_back(j);
    } else if (std::isfinite(hi)) {
      map[j] = {VarMap::Mirrored, ncols++, hi};
    } else {
      map[j] = {VarMap::Free, ncols, 0.0};
      ncols += 2;
    }
  }
  const Index n_struct = ncols;
  ncols += static_cast<Index>(boxed.size());  // slack columns for finite upper bounds
  const Index m_eq = lp.A_eq.rows();
  const Index m = m_eq + static_cast<Index>(boxed.size());

  MatrixXd A = MatrixXd::Zero(m, ncols);
  VectorXd b = VectorXd::Zero(m);
  VectorXd c = VectorXd::Zero(ncols);
  for (Index j = 0; j < n; ++j) {
    const VarMap& v = map[j];
    switch (v.kind) {
      case VarMap::Shifted:
        c[v.col] = lp.cost[j];
        break;
      case VarMap::Mirrored:
        c[v.col] = -lp.cost[j];
        break;
      case VarMap::Free:
        c[v.col] = lp.cost[j];
        c[v.col + 1] = -lp.cost[j];
        break;
    }
    for (Index i = 0; i < m_eq; ++i) {
      const double a = lp.A_eq(i, j);
      if (a == 0.0) continue;
      b[i] -= a * v.offset;
      switch (v.kind) {
        case VarMap::Shifted:
          A(i, v.col) = a;
          break;
        case VarMap::Mirrored:
          A(i, v.col) = -a;
          break;
        case VarMap::Free:
          A(i, v.col) = a;
          A(i, v.col + 1) = -a;
          break;
      }
    }
  }
  for (std::size_t k = 0; k < boxed.size(); ++k) {
    const Index j = boxed[k];
    const Index row = m_eq + static_cast<Index>(k);
    A(row, map[j].col) = 1.0;
    A(row, n_struct + static_cast<Index>(k)) = 1.0;
    b[row] = lp.upper[j] - lp.lower[j];
  }
  b.head(m_eq) += lp.b_eq;
  for (Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      A.row(i) *= -1.0;
      b[i] = -b[i];
    }
  }

  // Phase 1 with one artificial per row.
  MatrixXd t = MatrixXd::Zero(m + 1, ncols + m + 1);
  t.topLeftCorner(m, ncols) = A;
  t.block(0, ncols, m, m).setIdentity();
  t.topRightCorner(m, 1) = b;
  for (Index i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (Index i = 0; i < m; ++i) t(m, ncols + i) = 0.0;
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = ncols + i;
  Tableau phase1(std::move(t), std::move(basis));
  phase1.optimize(ncols + m);

  const double infeas = -phase1.data()(m, ncols + m);
  if (infeas > 1e-9 * std::max(1.0, b.lpNorm<Eigen::Infinity>()))
    throw Infeasible("linear program has no feasible point");

  // Drive artificials out of the basis; rows where that fails are redundant.
  std::vector<Index> keep_rows;
  for (Index r = 0; r < m; ++r) {
    if (phase1.basis()[static_cast<std::size_t>(r)] >= ncols) {
      Index col = -1;
      for (Index j = 0; j < ncols; ++j) {
        if (std::abs(phase1.data()(r, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) phase1.pivot(r, col);
    }
  }
  for (Index r = 0; r < m; ++r)
    if (phase1.basis()[static_cast<std::size_t>(r)] < ncols) keep_rows.push_back(r);

  // Phase 2 on the structural columns.
  const auto m2 = static_cast<Index>(keep_rows.size());
  MatrixXd t2 = MatrixXd::Zero(m2 + 1, ncols + 1);
  std::vector<Index> basis2;
  for (Index k = 0; k < m2; ++k) {
    const Index r = keep_rows[static_cast<std::size_t>(k)];
    t2.row(k).head(ncols) = phase1.data().row(r).head(ncols);
    t2(k, ncols) = phase1.data()(r, ncols + m);
    basis2.push_back(phase1.basis()[static_cast<std::size_t>(r)]);
  }
  t2.row(m2).head(ncols) = c.transpose();
  for (Index k = 0; k < m2; ++k) {
    const double cb = c[basis2[static_cast<std::size_t>(k)]];
    if (cb != 0.0) t2.row(m2) -= cb * t2.row(k);
  }
  Tableau phase2(std::move(t2), std::move(basis2));
  if (!phase2.optimize(ncols)) throw Unbounded("linear program is unbounded");

  VectorXd u = VectorXd::Zero(ncols);
  for (Index k = 0; k < m2; ++k) u[phase2.basis()[static_cast<std::size_t>(k)]] = phase2.data()(k, ncols);

  LpSolution sol;
  sol.x.resize(n);
  for (Index j = 0; j < n; ++j) {
    const VarMap& v = map[j];
    switch (v.kind) {
      case VarMap::Shifted:
        sol.x[j] = v.offset + u[v.col];
        break;
      case VarMap::Mirrored:
        sol.x[j] = v.offset - u[v.col];
        break;
      case VarMap::Free:
        sol.x[j] = u[v.col] - u[v.col + 1];
        break;
    }
  }
  sol.value = lp.cost.dot(sol.x);
  return sol;
}

}  // namespace lassoeq
