#include "lassoeq/equivalence.hpp"

#include <algorithm>
#include <cmath>

#include "lassoeq/errors.hpp"
#include "lassoeq/spectral.hpp"

namespace lassoeq {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(Metric metric) { return metric == Metric::Rmse ? "rmse" : "deviance"; }

Metric metric_from_string(std::string_view name) {
  if (name == "rmse") return Metric::Rmse;
  if (name == "deviance") return Metric::Deviance;
  throw InputError("unknown metric '" + std::string(name) + "' (expected rmse or deviance)");
}

Metric default_metric(Task task) { return task == Task::Regression ? Metric::Rmse : Metric::Deviance; }

double rmse(const VectorXd& beta, const MatrixXd& X, const VectorXd& y) {
  if (X.rows() != y.size() || X.cols() != beta.size()) throw DimensionMismatch("rmse: dimensions disagree");
  return (y - X * beta).norm() / std::sqrt(static_cast<double>(y.size()));
}

double deviance(const VectorXd& beta, double intercept, const MatrixXd& X, const VectorXd& y) {
  if (X.rows() != y.size() || X.cols() != beta.size()) throw DimensionMismatch("deviance: dimensions disagree");
  return logistic_loss(beta, intercept, X, y) / static_cast<double>(y.size());
}

double evaluate_metric(Metric metric, const VectorXd& beta, double intercept, const MatrixXd& X, const VectorXd& y) {
  if (metric == Metric::Deviance) return deviance(beta, intercept, X, y);
  if (intercept == 0.0) return rmse(beta, X, y);
  return rmse(beta, X, (y.array() - intercept).matrix());
}

namespace {

void check_metric(Metric metric, Task task) {
  if (metric == Metric::Deviance && task != Task::Classification)
    throw InputError("the deviance metric requires a classification task");
}

double acceptance_threshold(double tol, double reference_metric) {
  return (1.0 + tol) * reference_metric * (1.0 + kMetricRoundingSlack);
}

std::vector<Index> support_of(const VectorXd& beta) {
  std::vector<Index> s;
  for (Index j = 0; j < beta.size(); ++j)
    if (std::abs(beta[j]) > kSupportThreshold) s.push_back(j);
  return s;
}

VectorXd embed(const VectorXd& x_E, const std::vector<Index>& support, Index p) {
  VectorXd beta = VectorXd::Zero(p);
  for (std::size_t k = 0; k < support.size(); ++k) beta[support[k]] = x_E[static_cast<Index>(k)];
  return beta;
}

void finalize(EquivalentSolutionSet& out, std::vector<VectorXd> betas, const MatrixXd& X, const VectorXd& y) {
  const double scale = std::max(1.0, out.reference.beta.lpNorm<Eigen::Infinity>());
  betas = sort_and_dedup(std::move(betas), 1e-9 * scale);
  out.solutions.clear();
  for (auto& b : betas) {
    for (Index j = 0; j < b.size(); ++j)
      if (std::abs(b[j]) <= kSupportThreshold) b[j] = 0.0;
    EquivalentSolution sol;
    sol.metric_value = evaluate_metric(out.metric, b, out.reference.intercept, X, y);
    sol.support = support_of(b);
    sol.beta = std::move(b);
    out.solutions.push_back(std::move(sol));
  }
}

}  // namespace

MatrixXd select_columns(const MatrixXd& X, const std::vector<Index>& cols) {
  MatrixXd out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0 || cols[k] >= X.cols()) throw IndexOutOfRange("column index out of range");
    out.col(static_cast<Index>(k)) = X.col(cols[k]);
  }
  return out;
}

bool is_equivalent(const VectorXd& beta, const LassoSolution& ref, Metric metric, double tol, const MatrixXd& X,
                   const VectorXd& y) {
  if (beta.size() != ref.beta.size()) return false;
  for (Index j = 0; j < beta.size(); ++j)
    if (std::abs(beta[j]) > kSupportThreshold && std::abs(ref.beta[j]) <= kSupportThreshold) return false;
  const double d_ref = evaluate_metric(metric, ref.beta, ref.intercept, X, y);
  return evaluate_metric(metric, beta, ref.intercept, X, y) <= acceptance_threshold(tol, d_ref);
}

EquivalentSolutionSet enumerate_relaxed(const LassoSolution& ref, Metric metric, double tol, Index d_max,
                                        const MatrixXd& X, const VectorXd& y, const EnumerationOptions& opts) {
  if (ref.support.empty()) throw EmptySupport("reference solution has an empty support");
  if (!(tol >= 0.0)) throw InputError("tol must be >= 0");
  if (d_max < 1) throw InputError("d_max must be >= 1");
  if (X.cols() != ref.beta.size() || X.rows() != y.size()) throw DimensionMismatch("data does not match the model");
  check_metric(metric, ref.task);

  const Index p = X.cols();
  const auto e = static_cast<Index>(ref.support.size());
  const VectorXd beta_E = ref.beta_support();
  const VectorXd s = ref.signs_vector();
  const SpectralData spectral = thin_svd(select_columns(X, ref.support));
  const double l = ref.beta.lpNorm<Eigen::Infinity>();

  EquivalentSolutionSet out;
  out.reference = ref;
  out.metric = metric;
  out.tol = tol;
  out.box_halfwidth = l;
  out.reference_metric = evaluate_metric(metric, ref.beta, ref.intercept, X, y);
  out.i_star_final = e;
  const double threshold = acceptance_threshold(tol, out.reference_metric);

  std::vector<VectorXd> accepted{ref.beta};
  std::vector<VectorXd> last_clean;
  for (Index i = 1; i <= std::min(d_max, e); ++i) {
    const Index i_star = e - i;
    const Restriction r = restriction_matrix(spectral, i_star);
    const Polytope P = build_relaxed_polytope(r.V_star, beta_E, s, l);
    const std::vector<VectorXd> vertices = enumerate_vertices(P, opts.dim_cap);

    std::vector<VectorXd> passing;
    for (const auto& v : vertices) {
      VectorXd beta = embed(v, ref.support, p);
      if (evaluate_metric(metric, beta, ref.intercept, X, y) <= threshold) passing.push_back(std::move(beta));
    }
    const bool broke = passing.size() < vertices.size();
    out.steps.push_back({i_star, vertices.size(), passing.size()});

    if (opts.strict_break) {
      if (broke) break;
      last_clean = std::move(passing);
      out.i_star_final = i_star;
    } else {
      accepted.insert(accepted.end(), passing.begin(), passing.end());
      out.i_star_final = i_star;
      if (broke) break;
    }
  }
  if (opts.strict_break) accepted.insert(accepted.end(), last_clean.begin(), last_clean.end());

  out.sigma_bar = restriction_matrix(spectral, out.i_star_final).sigma_bar;
  finalize(out, std::move(accepted), X, y);
  return out;
}

EquivalentSolutionSet enumerate_strong(const LassoSolution& ref, const MatrixXd& X, const VectorXd& y,
                                       const EnumerationOptions& opts) {
  if (ref.support.empty()) throw EmptySupport("reference solution has an empty support");
  if (X.cols() != ref.beta.size() || X.rows() != y.size()) throw DimensionMismatch("data does not match the model");

  const MatrixXd X_E = select_columns(X, ref.support);
  const Polytope P = build_strong_polytope(X_E, ref.beta_support(), ref.signs_vector());
  const SpectralData spectral = thin_svd(X_E);

  EquivalentSolutionSet out;
  out.reference = ref;
  out.metric = default_metric(ref.task);
  out.tol = 0.0;
  out.i_star_final = spectral.rank;
  out.sigma_bar = restriction_matrix(spectral, spectral.rank).sigma_bar;
  out.reference_metric = evaluate_metric(out.metric, ref.beta, ref.intercept, X, y);

  std::vector<VectorXd> betas;
  for (const auto& v : enumerate_vertices(P, opts.dim_cap)) betas.push_back(embed(v, ref.support, X.cols()));
  out.steps.push_back({spectral.rank, betas.size(), betas.size()});
  finalize(out, std::move(betas), X, y);
  return out;
}

}  // namespace lassoeq
