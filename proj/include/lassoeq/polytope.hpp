#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lassoeq {

/// Axis-aligned box center +/- halfwidth in every coordinate.
struct Box {
  Eigen::VectorXd center;
  double halfwidth = 0.0;
};

/// Convex set {x : A x = b, diag(signs) x >= 0, x in box}.
///
/// The equality rows are reduced at construction to an orthonormal basis of
/// their row space, so `eq_rows()` has full row rank. Inconsistent equalities
/// leave the polytope empty (`consistent() == false`) rather than throwing.
class Polytope {
 public:
  /// `scale` sets the absolute tolerance unit for feasibility and vertex
  /// deduplication (1e-9 * scale); builders pass max(1, ||beta_E||_inf).
  Polytope(const Eigen::MatrixXd& eq_rows, const Eigen::VectorXd& eq_rhs, Eigen::VectorXd signs,
           std::optional<Box> box = std::nullopt, double scale = 1.0);

  Eigen::Index dim() const { return signs_.size(); }
  Eigen::Index n_equalities() const { return eq_rows_.rows(); }
  Eigen::Index reduced_dim() const { return dim() - n_equalities(); }

  const Eigen::MatrixXd& eq_rows() const { return eq_rows_; }
  const Eigen::VectorXd& eq_rhs() const { return eq_rhs_; }
  const Eigen::VectorXd& signs() const { return signs_; }
  const std::optional<Box>& box() const { return box_; }
  bool consistent() const { return consistent_; }
  double scale() const { return scale_; }
  double tolerance() const { return 1e-9 * scale_; }

  /// Per-coordinate bounds implied by the sign and box constraints.
  double lower(Eigen::Index i) const { return lower_[i]; }
  double upper(Eigen::Index i) const { return upper_[i]; }
  const Eigen::VectorXd& lower_bounds() const { return lower_; }
  const Eigen::VectorXd& upper_bounds() const { return upper_; }

  bool contains(const Eigen::VectorXd& x, double tol) const;

 private:
  Eigen::MatrixXd eq_rows_;
  Eigen::VectorXd eq_rhs_;
  Eigen::VectorXd signs_;
  std::optional<Box> box_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  double scale_ = 1.0;
  bool consistent_ = true;
};

inline constexpr Eigen::Index kDefaultDimCap = 20;
inline constexpr Eigen::Index kBruteForceDimCap = 8;

/// Strong-equivalence set {x : X_E (x - beta_E) = 0, diag(s) x >= 0}. The
/// equalities are the numerical-rank right singular vectors of X_E.
Polytope build_strong_polytope(const Eigen::MatrixXd& X_E, const Eigen::VectorXd& beta_E, const Eigen::VectorXd& s);

/// Relaxed set {x in beta_E + [-l, l]^d : V_star^T (x - beta_E) = 0, diag(s) x >= 0}.
Polytope build_relaxed_polytope(const Eigen::MatrixXd& V_star, const Eigen::VectorXd& beta_E,
                                const Eigen::VectorXd& s, double l);

/// Exact vertex set, deduplicated and sorted lexicographically.
///
/// The equalities are eliminated by writing x = x0 + N z with N an
/// orthonormal null-space basis; vertices are then the points where
/// reduced_dim() linearly independent bound constraints are tight. Subsets
/// are walked depth-first and a branch is cut as soon as its rows become
/// linearly dependent.
///
/// Throws Unbounded (box-free polytopes with a recession direction) and
/// DimensionTooLarge when reduced_dim() > dim_cap.
std::vector<Eigen::VectorXd> enumerate_vertices(const Polytope& P, Eigen::Index dim_cap = kDefaultDimCap);

/// Testing oracle: tries every reduced_dim()-subset of the sign and box
/// rows in the original coordinates, stacks it under the equalities and
/// solves the square system. Same output contract as enumerate_vertices.
std::vector<Eigen::VectorXd> brute_force_vertices(const Polytope& P);

/// Lexicographic sort followed by removal of points within `tol` (L-inf) of
/// an earlier kept point.
std::vector<Eigen::VectorXd> sort_and_dedup(std::vector<Eigen::VectorXd> points, double tol);

}  // namespace lassoeq
