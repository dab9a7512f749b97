#include "lassoeq/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lassoeq/errors.hpp"
#include "lassoeq/lp.hpp"
#include "lassoeq/spectral.hpp"

namespace lassoeq {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_signs(const VectorXd& s) {
  for (Index i = 0; i < s.size(); ++i)
    if (s[i] != 1.0 && s[i] != -1.0) throw InvalidSigns("sign vector entries must be +1 or -1");
}

void check_signs_match(const VectorXd& beta_E, const VectorXd& s) {
  if (beta_E.size() != s.size()) throw DimensionMismatch("coefficient and sign vectors differ in length");
  check_signs(s);
  for (Index i = 0; i < s.size(); ++i)
    if (!(s[i] * beta_E[i] > 0.0)) throw InvalidSigns("sign vector does not match the coefficient signs");
}

bool lex_less(const VectorXd& a, const VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

VectorXd clamp_to_bounds(VectorXd x, const Polytope& P) {
  for (Index i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], P.lower(i), P.upper(i));
  return x;
}

}  // namespace

Polytope::Polytope(const MatrixXd& eq_rows, const VectorXd& eq_rhs, VectorXd signs, std::optional<Box> box,
                   double scale)
    : signs_(std::move(signs)), box_(std::move(box)), scale_(scale) {
  const Index d = signs_.size();
  if (d == 0) throw DimensionMismatch("polytope needs at least one coordinate");
  check_signs(signs_);
  if (eq_rows.rows() != eq_rhs.size()) throw DimensionMismatch("equality rows and right-hand side disagree");
  if (eq_rows.rows() > 0 && eq_rows.cols() != d) throw DimensionMismatch("equality rows have the wrong width");
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw InputError("polytope scale must be positive");
  if (box_) {
    if (box_->center.size() != d) throw InvalidBox("box center has the wrong length");
    if (!(box_->halfwidth > 0.0) || !std::isfinite(box_->halfwidth) || !box_->center.allFinite())
      throw InvalidBox("box halfwidth must be positive and finite");
  }

  lower_.resize(d);
  upper_.resize(d);
  for (Index i = 0; i < d; ++i) {
    lower_[i] = signs_[i] > 0.0 ? 0.0 : -kInf;
    upper_[i] = signs_[i] > 0.0 ? kInf : 0.0;
    if (box_) {
      lower_[i] = std::max(lower_[i], box_->center[i] - box_->halfwidth);
      upper_[i] = std::min(upper_[i], box_->center[i] + box_->halfwidth);
    }
  }

  eq_rows_.resize(0, d);
  eq_rhs_.resize(0);
  if (eq_rows.rows() == 0) return;

  // Rank-revealing reduction: keep V_r^T with rhs S_r^{-1} U_r^T b.
  Eigen::JacobiSVD<MatrixXd> svd(eq_rows, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  const double cut = sv.size() && sv[0] > 0.0
                         ? sv[0] * static_cast<double>(std::max(eq_rows.rows(), d)) *
                               std::numeric_limits<double>::epsilon()
                         : 0.0;
  Index r = 0;
  while (r < sv.size() && sv[r] > cut) ++r;
  const MatrixXd Ur = svd.matrixU().leftCols(r);
  const MatrixXd Vr = svd.matrixV().leftCols(r);
  eq_rows_ = Vr.transpose();
  eq_rhs_ = (Ur.transpose() * eq_rhs).cwiseQuotient(sv.head(r));
  const VectorXd x_ls = Vr * eq_rhs_;
  const double resid = (eq_rows * x_ls - eq_rhs).lpNorm<Eigen::Infinity>();
  consistent_ = resid <= 1e-9 * std::max(1.0, eq_rhs.lpNorm<Eigen::Infinity>());
}

bool Polytope::contains(const VectorXd& x, double tol) const {
  if (x.size() != dim()) return false;
  for (Index i = 0; i < dim(); ++i)
    if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
  if (n_equalities() == 0) return true;
  return (eq_rows_ * x - eq_rhs_).lpNorm<Eigen::Infinity>() <= tol;
}

Polytope build_strong_polytope(const MatrixXd& X_E, const VectorXd& beta_E, const VectorXd& s) {
  if (X_E.cols() != beta_E.size()) throw DimensionMismatch("X_E columns do not match beta_E length");
  check_signs_match(beta_E, s);
  const SpectralData spectral = thin_svd(X_E);
  const MatrixXd V_plus = spectral.V.leftCols(spectral.rank);
  const double scale = std::max(1.0, beta_E.lpNorm<Eigen::Infinity>());
  return Polytope(V_plus.transpose(), V_plus.transpose() * beta_E, s, std::nullopt, scale);
}

Polytope build_relaxed_polytope(const MatrixXd& V_star, const VectorXd& beta_E, const VectorXd& s, double l) {
  if (!(l > 0.0) || !std::isfinite(l)) throw InvalidBox("box halfwidth l must be positive and finite");
  check_signs_match(beta_E, s);
  const Index d = beta_E.size();
  if (V_star.cols() > 0) {
    if (V_star.rows() != d) throw DimensionMismatch("V_star rows do not match beta_E length");
    const double ortho =
        (V_star.transpose() * V_star - MatrixXd::Identity(V_star.cols(), V_star.cols())).lpNorm<Eigen::Infinity>();
    if (ortho > 1e-8) throw InputError("V_star columns are not orthonormal");
  }
  const double scale = std::max(1.0, beta_E.lpNorm<Eigen::Infinity>());
  MatrixXd rows = V_star.cols() > 0 ? MatrixXd(V_star.transpose()) : MatrixXd(0, d);
  VectorXd rhs = V_star.cols() > 0 ? VectorXd(V_star.transpose() * beta_E) : VectorXd(0);
  return Polytope(rows, rhs, s, Box{beta_E, l}, scale);
}

std::vector<VectorXd> sort_and_dedup(std::vector<VectorXd> points, double tol) {
  std::sort(points.begin(), points.end(), lex_less);
  std::vector<VectorXd> kept;
  for (auto& x : points) {
    const bool dup = std::any_of(kept.begin(), kept.end(), [&](const VectorXd& k) {
      return (k - x).lpNorm<Eigen::Infinity>() <= tol;
    });
    if (!dup) kept.push_back(std::move(x));
  }
  return kept;
}

namespace {

// True when the sign cone intersected with the equality null space holds a
// nonzero direction, i.e. max s^T r over {A r = 0, S r >= 0, s^T r <= 1} > 0.
bool has_recession_direction(const Polytope& P) {
  const Index d = P.dim();
  LinearProgram lp;
  lp.cost = VectorXd::Zero(d + 1);
  lp.cost.head(d) = -P.signs();
  lp.A_eq = MatrixXd::Zero(P.n_equalities() + 1, d + 1);
  lp.A_eq.topLeftCorner(P.n_equalities(), d) = P.eq_rows();
  lp.A_eq.block(P.n_equalities(), 0, 1, d) = P.signs().transpose();
  lp.A_eq(P.n_equalities(), d) = 1.0;
  lp.b_eq = VectorXd::Zero(P.n_equalities() + 1);
  lp.b_eq[P.n_equalities()] = 1.0;
  lp.lower.resize(d + 1);
  lp.upper.resize(d + 1);
  for (Index i = 0; i < d; ++i) {
    lp.lower[i] = P.signs()[i] > 0.0 ? 0.0 : -kInf;
    lp.upper[i] = P.signs()[i] > 0.0 ? kInf : 0.0;
  }
  lp.lower[d] = 0.0;
  lp.upper[d] = kInf;
  return solve_linear_program(lp).value < -1e-9;
}

}  // namespace

std::vector<VectorXd> enumerate_vertices(const Polytope& P, Index dim_cap) {
  if (!P.consistent()) return {};
  const Index d = P.dim();
  const double tol = P.tolerance();
  for (Index i = 0; i < d; ++i)
    if (P.lower(i) > P.upper(i) + tol) return {};

  const Index m = P.reduced_dim();
  if (m > dim_cap) throw DimensionTooLarge(m, dim_cap);

  // x = x0 + N z, N orthonormal basis of the equality null space.
  VectorXd x0 = VectorXd::Zero(d);
  MatrixXd N = MatrixXd::Identity(d, d);
  if (P.n_equalities() > 0) {
    x0 = P.eq_rows().transpose() * P.eq_rhs();  // rows are orthonormal
    Eigen::JacobiSVD<MatrixXd> svd(P.eq_rows(), Eigen::ComputeFullV);
    N = svd.matrixV().rightCols(m);
  }

  if (m == 0) {
    if (!P.contains(x0, tol)) return {};
    return {clamp_to_bounds(x0, P)};
  }
  if (!P.box() && has_recession_direction(P)) throw Unbounded("polytope is unbounded (sign cone meets the null space)");

  // Rows g z <= h for every finite bound.
  struct Row {
    VectorXd g;
    double h;
  };
  std::vector<Row> rows;
  for (Index i = 0; i < d; ++i) {
    const VectorXd n_i = N.row(i).transpose();
    if (n_i.norm() < 1e-12) continue;  // coordinate pinned by the equalities
    if (std::isfinite(P.lower(i))) rows.push_back({-n_i, x0[i] - P.lower(i)});
    if (std::isfinite(P.upper(i))) rows.push_back({n_i, P.upper(i) - x0[i]});
  }
  const auto R = static_cast<Index>(rows.size());

  std::vector<VectorXd> found;
  std::vector<Index> chosen;
  MatrixXd Q(m, m);  // orthonormalized normals of the chosen rows

  std::function<void(Index)> descend = [&](Index start) {
    const auto depth = static_cast<Index>(chosen.size());
    if (depth == m) {
      MatrixXd G(m, m);
      VectorXd h(m);
      for (Index k = 0; k < m; ++k) {
        G.row(k) = rows[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])].g.transpose();
        h[k] = rows[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])].h;
      }
      const VectorXd z = G.partialPivLu().solve(h);
      const VectorXd x = x0 + N * z;
      if (x.allFinite() && P.contains(x, tol)) found.push_back(clamp_to_bounds(x, P));
      return;
    }
    for (Index i = start; i <= R - (m - depth); ++i) {
      const VectorXd& g = rows[static_cast<std::size_t>(i)].g;
      VectorXd res = g;
      if (depth > 0) res -= Q.leftCols(depth) * (Q.leftCols(depth).transpose() * g);
      const double rn = res.norm();
      if (rn <= 1e-9 * g.norm()) continue;
      Q.col(depth) = res / rn;
      chosen.push_back(i);
      descend(i + 1);
      chosen.pop_back();
    }
  };
  descend(0);
  return sort_and_dedup(std::move(found), tol);
}

std::vector<VectorXd> brute_force_vertices(const Polytope& P) {
  if (!P.consistent()) return {};
  const Index d = P.dim();
  const Index k = P.n_equalities();
  const Index m = d - k;
  if (m > kBruteForceDimCap) throw DimensionTooLarge(m, kBruteForceDimCap);
  const double tol = P.tolerance();

  // Every inequality as a (coordinate, value) face x_i = value.
  std::vector<std::pair<Index, double>> faces;
  for (Index i = 0; i < d; ++i) {
    faces.emplace_back(i, 0.0);
    if (P.box()) {
      faces.emplace_back(i, P.box()->center[i] - P.box()->halfwidth);
      faces.emplace_back(i, P.box()->center[i] + P.box()->halfwidth);
    }
  }
  const auto F = static_cast<Index>(faces.size());

  auto feasible = [&](const VectorXd& x) {
    for (Index i = 0; i < d; ++i) {
      if (P.signs()[i] * x[i] < -tol) return false;
      if (P.box() && std::abs(x[i] - P.box()->center[i]) > P.box()->halfwidth + tol) return false;
    }
    return k == 0 || (P.eq_rows() * x - P.eq_rhs()).lpNorm<Eigen::Infinity>() <= tol;
  };

  std::vector<VectorXd> found;
  if (m > F) return {};
  std::vector<Index> idx(static_cast<std::size_t>(m));
  for (Index t = 0; t < m; ++t) idx[static_cast<std::size_t>(t)] = t;
  while (true) {
    MatrixXd M = MatrixXd::Zero(d, d);
    VectorXd rhs(d);
    if (k > 0) {
      M.topRows(k) = P.eq_rows();
      rhs.head(k) = P.eq_rhs();
    }
    for (Index t = 0; t < m; ++t) {
      const auto& [coord, value] = faces[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
      M(k + t, coord) = 1.0;
      rhs[k + t] = value;
    }
    Eigen::FullPivLU<MatrixXd> lu(M);
    if (lu.isInvertible()) {
      const VectorXd x = lu.solve(rhs);
      if (feasible(x)) found.push_back(clamp_to_bounds(x, P));
    }
    // Next m-combination of [0, F).
    Index t = m - 1;
    while (t >= 0 && idx[static_cast<std::size_t>(t)] == F - m + t) --t;
    if (t < 0) break;
    ++idx[static_cast<std::size_t>(t)];
    for (Index u = t + 1; u < m; ++u) idx[static_cast<std::size_t>(u)] = idx[static_cast<std::size_t>(u - 1)] + 1;
  }
  return sort_and_dedup(std::move(found), tol);
}

}  // namespace lassoeq
