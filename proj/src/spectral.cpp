#include "lassoeq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lassoeq/errors.hpp"

namespace lassoeq {

using Eigen::Index;

SpectralData thin_svd(const Eigen::MatrixXd& X_E) {
  if (X_E.size() == 0) throw InputError("thin_svd: empty matrix");
  if (!X_E.allFinite()) throw InputError("thin_svd: non-finite entries");
  const Index n = X_E.rows();
  const Index m = X_E.cols();

  // One-sided Jacobi is slow for big matrices but the active set is small
  // and Jacobi gives the tiny singular values to high relative accuracy.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X_E, Eigen::ComputeThinU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw NoConvergence("Jacobi SVD", 0);

  SpectralData out;
  const Index k = std::min(n, m);
  out.U = svd.matrixU().leftCols(k);
  out.V = svd.matrixV();
  out.sigma = Eigen::VectorXd::Zero(m);
  out.sigma.head(k) = svd.singularValues().head(k);

  const double eps_rank =
      out.sigma[0] * static_cast<double>(std::max(n, m)) * std::numeric_limits<double>::epsilon();
  out.rank = 0;
  for (Index j = 0; j < m; ++j)
    if (out.sigma[j] > eps_rank) ++out.rank;
  return out;
}

Restriction restriction_matrix(const SpectralData& s, Index i_star) {
  const Index m = s.dim();
  if (i_star < 0 || i_star > m)
    throw IndexOutOfRange("i_star = " + std::to_string(i_star) + " outside [0, " + std::to_string(m) + "]");
  return {s.V.leftCols(i_star), s.sigma.tail(m - i_star)};
}

namespace {

void check_bound_args(double l, Index support_size, Index n) {
  if (!(l >= 0.0) || support_size < 0 || n < 1) throw InputError("bound arguments must be nonnegative with n >= 1");
}

}  // namespace

double rmse_bound(double l, const Eigen::VectorXd& sigma_bar, Index support_size, Index n, double rmse_ref) {
  check_bound_args(l, support_size, n);
  const double norm = sigma_bar.size() ? sigma_bar.cwiseAbs().maxCoeff() : 0.0;
  return rmse_ref + 2.0 * l * norm * std::sqrt(static_cast<double>(support_size) / static_cast<double>(n));
}

double dev_bound(double l, const Eigen::VectorXd& sigma_bar, Index support_size, Index n, double dev_ref) {
  check_bound_args(l, support_size, n);
  const double norm = sigma_bar.size() ? sigma_bar.norm() : 0.0;
  return dev_ref + 2.0 * l * norm * std::sqrt(static_cast<double>(support_size) / static_cast<double>(n));
}

}  // namespace lassoeq
