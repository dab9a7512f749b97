#include "lassoeq/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "lassoeq/errors.hpp"

namespace lassoeq {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Coefficients beyond this magnitude (standardized units) mean the logistic
// fit is running off to infinity on separable data.
constexpr double kSeparableCap = 1e4;
constexpr long kMaxNewtonSteps = 1000;

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_dims(const MatrixXd& X, const VectorXd& y) {
  if (X.rows() != y.size()) throw DimensionMismatch("design has " + std::to_string(X.rows()) +
                                                    " rows but target has " + std::to_string(y.size()));
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be finite and >= 0");
}

// Cyclic coordinate descent for
//   0.5*||z - X beta||^2 + lambda*||beta||_1 + 0.5*ridge*||beta||^2.
// Returns false in `converged` when the sweep budget runs out.
VectorXd coordinate_descent(const MatrixXd& X, const VectorXd& z, double lambda, double ridge, VectorXd beta,
                            double tolerance, long max_sweeps, bool& converged) {
  const Index p = X.cols();
  const VectorXd col_sq = X.colwise().squaredNorm();
  VectorXd r = z - X * beta;
  converged = false;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double denom = col_sq[j] + ridge;
      if (!(denom > 0.0)) continue;
      const double old = beta[j];
      const double rho = X.col(j).dot(r) + col_sq[j] * old;
      const double updated = soft_threshold(rho, lambda) / denom;
      const double delta = updated - old;
      if (delta != 0.0) {
        r.noalias() -= delta * X.col(j);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < tolerance) {
      converged = true;
      return beta;
    }
  }
  return beta;
}

// Primal active-set method on the same objective, started from `beta`.
// Each step solves the stationarity system on the active set with fixed
// signs, then walks toward it until a coefficient would cross zero. Columns
// are added one at a time, largest violation first. The result is exact up
// to the linear solves. Returns nullopt when the active Gram matrix is
// numerically singular (e.g. ridge = 0 with duplicated columns), in which
// case the caller keeps the coordinate-descent answer.
std::optional<VectorXd> active_set_refine(const MatrixXd& X, const VectorXd& z, double lambda, double ridge,
                                          VectorXd beta) {
  const Index p = X.cols();
  const double scale = std::max({1.0, lambda, (X.transpose() * z).cwiseAbs().maxCoeff()});
  const double eps = 1e-12 * scale;
  bool at_target = false;

  for (Index iter = 0; iter < 20 * p + 100; ++iter) {
    const VectorXd c = X.transpose() * (z - X * beta) - ridge * beta;
    std::vector<Index> active;
    std::vector<double> signs;
    for (Index j = 0; j < p; ++j) {
      if (beta[j] != 0.0) {
        active.push_back(j);
        signs.push_back(sign_of(beta[j]));
      }
    }
    Index entering = -1;
    double worst = eps;
    for (Index j = 0; j < p; ++j) {
      if (beta[j] != 0.0) continue;
      const double v = std::abs(c[j]) - lambda;
      if (v > worst) {
        worst = v;
        entering = j;
      }
    }
    if (entering < 0 && at_target) return beta;
    if (entering >= 0) {
      auto pos = std::lower_bound(active.begin(), active.end(), entering);
      const auto k = pos - active.begin();
      active.insert(pos, entering);
      signs.insert(signs.begin() + k, sign_of(c[entering]));
    }
    if (active.empty()) return beta;

    const auto m = static_cast<Index>(active.size());
    MatrixXd XA(X.rows(), m);
    VectorXd sA(m), betaA(m);
    for (Index k = 0; k < m; ++k) {
      XA.col(k) = X.col(active[k]);
      sA[k] = signs[k];
      betaA[k] = beta[active[k]];
    }
    MatrixXd gram = XA.transpose() * XA;
    gram.diagonal().array() += ridge;
    Eigen::LDLT<MatrixXd> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13)) return std::nullopt;
    const VectorXd rhs = XA.transpose() * z - lambda * sA;
    VectorXd target = ldlt.solve(rhs);
    target += ldlt.solve(rhs - gram * target);

    double step = 1.0;
    Index blocking = -1;
    for (Index k = 0; k < m; ++k) {
      if (sA[k] * target[k] > 0.0) continue;
      if (betaA[k] == 0.0) return std::nullopt;  // entering column moved the wrong way
      const double t = betaA[k] / (betaA[k] - target[k]);
      if (t < step) {
        step = t;
        blocking = k;
      }
    }
    betaA += step * (target - betaA);
    if (blocking >= 0) betaA[blocking] = 0.0;
    for (Index k = 0; k < m; ++k) beta[active[k]] = betaA[k];
    at_target = blocking < 0;
  }
  return std::nullopt;
}

double quadratic_kkt(const MatrixXd& X, const VectorXd& z, double lambda, double ridge, const VectorXd& beta) {
  const VectorXd c = X.transpose() * (z - X * beta) - ridge * beta;
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    const double v = beta[j] != 0.0 ? std::abs(c[j] - lambda * sign_of(beta[j]))
                                    : std::max(std::abs(c[j]) - lambda, 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

constexpr long kWarmupSweeps = 1000;

// Coordinate descent followed by active-set polishing when it helps. Nearly
// collinear columns under a tiny ridge make coordinate descent crawl, so a
// short warm-up is tried first and the full sweep budget is only spent when
// the polish cannot finish the job.
VectorXd solve_quadratic(const MatrixXd& X, const VectorXd& z, double lambda, double ridge, VectorXd warm,
                         const SolverOptions& opts) {
  bool converged = false;
  const long warmup = std::min(kWarmupSweeps, opts.max_sweeps);
  VectorXd beta = coordinate_descent(X, z, lambda, ridge, std::move(warm), opts.tolerance, warmup, converged);
  auto refined = active_set_refine(X, z, lambda, ridge, beta);
  if (!converged && !refined && opts.max_sweeps > warmup) {
    beta = coordinate_descent(X, z, lambda, ridge, beta, opts.tolerance, opts.max_sweeps - warmup, converged);
    refined = active_set_refine(X, z, lambda, ridge, beta);
  }
  if (refined) {
    if (!converged || quadratic_kkt(X, z, lambda, ridge, *refined) <= quadratic_kkt(X, z, lambda, ridge, beta))
      return *refined;
  }
  if (!converged) throw NoConvergence("coordinate descent", opts.max_sweeps);
  return beta;
}

struct LogisticFit {
  VectorXd beta;
  double intercept;
};

double penalized_logistic(const VectorXd& beta, double b0, const MatrixXd& X, const VectorXd& y, double lambda,
                          double ridge) {
  return logistic_loss(beta, b0, X, y) + lambda * beta.lpNorm<1>() + 0.5 * ridge * beta.squaredNorm();
}

// Proximal Newton: each step minimizes the weighted quadratic model of the
// deviance plus the penalty exactly, then backtracks on the true objective.
LogisticFit logistic_newton(const MatrixXd& X, const VectorXd& y, double lambda, double ridge,
                            const SolverOptions& opts) {
  const Index n = X.rows();
  const Index p = X.cols();
  const double ybar = y.mean();
  VectorXd beta = VectorXd::Zero(p);
  double b0 = std::log(ybar / (1.0 - ybar));
  double f = penalized_logistic(beta, b0, X, y, lambda, ridge);

  for (long it = 0; it < kMaxNewtonSteps; ++it) {
    const VectorXd eta = (X * beta).array() + b0;
    VectorXd prob(n), w(n);
    for (Index i = 0; i < n; ++i) {
      prob[i] = sigmoid(eta[i]);
      w[i] = std::max(prob[i] * (1.0 - prob[i]), 1e-5);
    }
    const VectorXd resid = y - prob;
    const VectorXd z = eta.array() + resid.array() / w.array();
    const double sw = w.sum();
    const Eigen::RowVectorXd xbar = (w.transpose() * X) / sw;
    const double zbar = w.dot(z) / sw;
    const VectorXd sqw = w.cwiseSqrt();
    const MatrixXd Xh = sqw.asDiagonal() * (X.rowwise() - xbar);
    const VectorXd zh = sqw.array() * (z.array() - zbar);

    const VectorXd beta_new = solve_quadratic(Xh, zh, lambda, ridge, beta, opts);
    const double b0_new = zbar - xbar.dot(beta_new);
    const VectorXd d_beta = beta_new - beta;
    const double d_b0 = b0_new - b0;

    const VectorXd grad = -X.transpose() * resid + ridge * beta;
    const double descent =
        grad.dot(d_beta) - resid.sum() * d_b0 + lambda * (beta_new.lpNorm<1>() - beta.lpNorm<1>());

    double t = 1.0;
    double f_new = penalized_logistic(beta_new, b0_new, X, y, lambda, ridge);
    while (f_new > f + 1e-4 * t * std::min(descent, 0.0) && t > 1e-12) {
      t *= 0.5;
      f_new = penalized_logistic(beta + t * d_beta, b0 + t * d_b0, X, y, lambda, ridge);
    }
    if (f_new > f) return {beta, b0};  // no further progress at machine precision

    const double change = t * std::max(d_beta.size() ? d_beta.cwiseAbs().maxCoeff() : 0.0, std::abs(d_b0));
    beta += t * d_beta;
    b0 += t * d_b0;
    f = f_new;
    if (beta.size() && beta.cwiseAbs().maxCoeff() > kSeparableCap)
      throw SeparableData("logistic coefficients diverge (|beta| > " + std::to_string(kSeparableCap) +
                          "); the classes are likely separable");
    if (change < opts.tolerance) return {beta, b0};
  }
  const VectorXd eta = (X * beta).array() + b0;
  bool all_correct = true;
  for (Index i = 0; i < n; ++i)
    if ((2.0 * y[i] - 1.0) * eta[i] <= 0.0) all_correct = false;
  if (all_correct)
    throw SeparableData("logistic fit keeps growing while classifying every sample correctly; the classes are "
                        "separable");
  throw NoConvergence("logistic proximal Newton", kMaxNewtonSteps);
}

void check_binary(const VectorXd& y) {
  bool has0 = false, has1 = false;
  for (Index i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) has0 = true;
    else if (y[i] == 1.0) has1 = true;
    else throw NonBinaryTarget("logistic target must be 0/1");
  }
  if (!has0 || !has1) throw ConstantTarget("logistic target needs both classes");
}

}  // namespace

VectorXd LassoSolution::beta_support() const {
  VectorXd out(static_cast<Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) out[static_cast<Index>(k)] = beta[support[k]];
  return out;
}

VectorXd LassoSolution::signs_vector() const {
  VectorXd out(static_cast<Index>(signs.size()));
  for (std::size_t k = 0; k < signs.size(); ++k) out[static_cast<Index>(k)] = signs[k];
  return out;
}

LassoSolution make_solution(VectorXd beta, double intercept, double lambda, Task task, const MatrixXd& X,
                            const VectorXd& y) {
  LassoSolution sol;
  for (Index j = 0; j < beta.size(); ++j) {
    if (std::abs(beta[j]) <= kSupportThreshold) {
      beta[j] = 0.0;
    } else {
      sol.support.push_back(j);
      sol.signs.push_back(beta[j] > 0.0 ? 1 : -1);
    }
  }
  sol.beta = std::move(beta);
  sol.intercept = intercept;
  sol.lambda = lambda;
  sol.task = task;
  sol.objective = task == Task::Regression ? lasso_objective(sol.beta, X, y, lambda)
                                           : logistic_objective(sol.beta, intercept, X, y, lambda);
  return sol;
}

double lasso_objective(const VectorXd& beta, const MatrixXd& X, const VectorXd& y, double lambda) {
  check_dims(X, y);
  if (X.cols() != beta.size()) throw DimensionMismatch("coefficient length does not match column count");
  return 0.5 * (y - X * beta).squaredNorm() + lambda * beta.lpNorm<1>();
}

double logistic_loss(const VectorXd& beta, double intercept, const MatrixXd& X, const VectorXd& y) {
  check_dims(X, y);
  if (X.cols() != beta.size()) throw DimensionMismatch("coefficient length does not match column count");
  const VectorXd eta = (X * beta).array() + intercept;
  double total = 0.0;
  for (Index i = 0; i < eta.size(); ++i) total += log1p_exp(eta[i]) - y[i] * eta[i];
  return total;
}

double logistic_objective(const VectorXd& beta, double intercept, const MatrixXd& X, const VectorXd& y,
                          double lambda) {
  return logistic_loss(beta, intercept, X, y) + lambda * beta.lpNorm<1>();
}

double lambda_max(const MatrixXd& X, const VectorXd& y, Task task) {
  check_dims(X, y);
  if (task == Task::Regression) return (X.transpose() * y).cwiseAbs().maxCoeff();
  const VectorXd centered = y.array() - y.mean();
  return (X.transpose() * centered).cwiseAbs().maxCoeff();
}

LassoSolution fit_lasso(const MatrixXd& X, const VectorXd& y, double lambda, const SolverOptions& opts) {
  check_dims(X, y);
  check_lambda(lambda);
  VectorXd beta = solve_quadratic(X, y, lambda, 0.0, VectorXd::Zero(X.cols()), opts);
  return make_solution(std::move(beta), 0.0, lambda, Task::Regression, X, y);
}

LassoSolution fit_logistic_lasso(const MatrixXd& X, const VectorXd& y, double lambda, const SolverOptions& opts) {
  check_dims(X, y);
  check_lambda(lambda);
  check_binary(y);
  auto [beta, b0] = logistic_newton(X, y, lambda, 0.0, opts);
  return make_solution(std::move(beta), b0, lambda, Task::Classification, X, y);
}

LassoSolution fit(const MatrixXd& X, const VectorXd& y, double lambda, Task task, const SolverOptions& opts) {
  return task == Task::Regression ? fit_lasso(X, y, lambda, opts) : fit_logistic_lasso(X, y, lambda, opts);
}

double kkt_check(const LassoSolution& sol, const MatrixXd& X, const VectorXd& y, double lambda) {
  check_dims(X, y);
  if (X.cols() != sol.beta.size()) throw DimensionMismatch("coefficient length does not match column count");
  VectorXd resid;
  double worst = 0.0;
  if (sol.task == Task::Regression) {
    resid = y - X * sol.beta;
  } else {
    const VectorXd eta = (X * sol.beta).array() + sol.intercept;
    resid = y - eta.unaryExpr([](double e) { return sigmoid(e); });
    worst = std::abs(resid.sum());
  }
  const VectorXd corr = X.transpose() * resid;
  for (Index j = 0; j < corr.size(); ++j) {
    const double b = sol.beta[j];
    const double v = b != 0.0 ? std::abs(corr[j] - lambda * sign_of(b)) : std::max(std::abs(corr[j]) - lambda, 0.0);
    worst = std::max(worst, v);
  }
  return worst;
}

LassoSolution fit_reference(const MatrixXd& X, const VectorXd& y, double lambda, double ridge, Task task,
                            const SolverOptions& opts) {
  check_dims(X, y);
  check_lambda(lambda);
  if (!(ridge > 0.0)) throw InputError("reference ridge must be > 0");
  if (task == Task::Regression) {
    VectorXd beta = solve_quadratic(X, y, lambda, ridge, VectorXd::Zero(X.cols()), opts);
    return make_solution(std::move(beta), 0.0, lambda, task, X, y);
  }
  check_binary(y);
  auto [beta, b0] = logistic_newton(X, y, lambda, ridge, opts);
  return make_solution(std::move(beta), b0, lambda, task, X, y);
}

double auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw DimensionMismatch("auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Mann-Whitney U with mid-ranks for ties.
  double rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1.0) {
        rank_sum += mid_rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) throw InputError("auc needs both classes");
  return (rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

CvResult tune_lambda_cv(const Dataset& d, std::span<const double> grid, int folds, std::uint64_t seed,
                        const SolverOptions& opts) {
  if (grid.empty()) throw EmptyGrid("lambda grid is empty");
  if (folds < 2) throw FoldTooSmall("cross-validation needs at least 2 folds");
  check_dims(d.X, d.y);

  // Fold assignment: shuffle each stratum and deal rows round-robin.
  std::vector<int> fold_of(static_cast<std::size_t>(d.n()), 0);
  std::vector<std::vector<Index>> strata;
  if (d.task == Task::Classification) {
    strata.resize(2);
    for (Index i = 0; i < d.n(); ++i) strata[d.y[i] == 1.0 ? 1 : 0].push_back(i);
    for (const auto& s : strata)
      if (static_cast<int>(s.size()) < folds)
        throw FoldTooSmall("each class needs at least " + std::to_string(folds) + " samples for " +
                           std::to_string(folds) + "-fold cross-validation");
  } else {
    if (d.n() < 2 * folds) throw FoldTooSmall("too few samples for " + std::to_string(folds) + " folds");
    strata.emplace_back(static_cast<std::size_t>(d.n()));
    std::iota(strata[0].begin(), strata[0].end(), Index{0});
  }
  int next = 0;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    deterministic_shuffle(strata[k], seed + 0x9E3779B97F4A7C15ULL * k);
    for (Index row : strata[k]) {
      fold_of[static_cast<std::size_t>(row)] = next;
      next = (next + 1) % folds;
    }
  }

  const bool classify = d.task == Task::Classification;
  const double worst = classify ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  std::vector<double> totals(grid.size(), 0.0);
  std::vector<bool> failed(grid.size(), false);

  for (int f = 0; f < folds; ++f) {
    std::vector<Index> train, valid;
    for (Index i = 0; i < d.n(); ++i) (fold_of[static_cast<std::size_t>(i)] == f ? valid : train).push_back(i);
    const Dataset tr = take_rows(d, train);
    const Dataset va = take_rows(d, valid);

    // Regression folds are re-centered so the intercept-free fit applies.
    Eigen::RowVectorXd xmean = Eigen::RowVectorXd::Zero(d.p());
    double ymean = 0.0;
    MatrixXd Xtr = tr.X;
    VectorXd ytr = tr.y;
    if (!classify) {
      xmean = tr.X.colwise().mean();
      ymean = tr.y.mean();
      Xtr.rowwise() -= xmean;
      ytr.array() -= ymean;
    }

    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (failed[g]) continue;
      try {
        const LassoSolution sol = fit(Xtr, ytr, grid[g], d.task, opts);
        if (classify) {
          const VectorXd eta = (va.X * sol.beta).array() + sol.intercept;
          totals[g] += auc({eta.data(), static_cast<std::size_t>(eta.size())},
                           {va.y.data(), static_cast<std::size_t>(va.y.size())});
        } else {
          const VectorXd pred = ((va.X.rowwise() - xmean) * sol.beta).array() + ymean;
          totals[g] += (va.y - pred).cwiseAbs().mean();
        }
      } catch (const NumericalError&) {
        failed[g] = true;
      }
    }
  }

  CvResult result;
  result.cv_scores.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    result.cv_scores[g] = failed[g] ? worst : totals[g] / static_cast<double>(folds);

  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  std::size_t best = order.front();
  for (std::size_t g : order) {
    const double s = result.cv_scores[g];
    const double b = result.cv_scores[best];
    if (classify ? s > b : s < b) best = g;
  }
  result.lambda_star = grid[best];
  return result;
}

}  // namespace lassoeq
