#pragma once

#include <Eigen/Dense>

namespace lassoeq {

/// Thin SVD of an n x m active-set design X_E = U diag(sigma) V^T.
///
/// `sigma` always has m entries (zero-padded when n < m) so that the right
/// singular vectors in V (m x m) pair one-to-one with singular values; U
/// carries the min(n, m) left vectors that have a partner in sigma.
struct SpectralData {
  Eigen::MatrixXd U;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd V;
  /// Count of singular values above sigma_1 * max(n, m) * machine epsilon.
  Eigen::Index rank = 0;

  Eigen::Index dim() const { return V.cols(); }
};

SpectralData thin_svd(const Eigen::MatrixXd& X_E);

/// The first `i_star` right singular vectors and the discarded singular
/// values (sigma_{i_star+1}, ..., sigma_m).
struct Restriction {
  Eigen::MatrixXd V_star;
  Eigen::VectorXd sigma_bar;
};

Restriction restriction_matrix(const SpectralData& s, Eigen::Index i_star);

/// Worst-case RMSE over the relaxed polytope:
/// rmse_ref + 2 * l * ||sigma_bar||_inf * sqrt(|E| / n).
double rmse_bound(double l, const Eigen::VectorXd& sigma_bar, Eigen::Index support_size, Eigen::Index n,
                  double rmse_ref);

/// Worst-case mean deviance over the relaxed polytope:
/// dev_ref + 2 * l * ||sigma_bar||_2 * sqrt(|E| / n).
double dev_bound(double l, const Eigen::VectorXd& sigma_bar, Eigen::Index support_size, Eigen::Index n,
                 double dev_ref);

}  // namespace lassoeq
