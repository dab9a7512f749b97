#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lassoeq/spectral.hpp"

namespace lassoeq::testkit {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = normal(rng);
  return M;
}

Dataset random_regression(Index n, Index p, std::uint64_t seed, Index signal, double noise) {
  std::mt19937_64 rng(seed);
  Dataset d;
  d.X = gaussian_matrix(n, p, rng);
  VectorXd beta = VectorXd::Zero(p);
  std::uniform_real_distribution<double> mag(1.0, 2.0);
  std::bernoulli_distribution coin(0.5);
  for (Index j = 0; j < std::min(signal, p); ++j) beta[j] = (coin(rng) ? 1.0 : -1.0) * mag(rng);
  d.y = d.X * beta + noise * gaussian_matrix(n, 1, rng);
  for (Index j = 0; j < p; ++j) d.column_names.push_back("x" + std::to_string(j));
  d.task = Task::Regression;
  return standardize(d).first;
}

Dataset random_classification(Index n, Index p, std::uint64_t seed, Index signal) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    Dataset d;
    d.X = gaussian_matrix(n, p, rng);
    VectorXd beta = VectorXd::Zero(p);
    for (Index j = 0; j < std::min(signal, p); ++j) beta[j] = j % 2 == 0 ? 1.0 : -0.8;
    const VectorXd eta = d.X * beta;
    d.y.resize(n);
    for (Index i = 0; i < n; ++i) d.y[i] = unif(rng) < 1.0 / (1.0 + std::exp(-eta[i])) ? 1.0 : 0.0;
    const double ones = d.y.sum();
    if (ones < 3 || ones > static_cast<double>(n) - 3) continue;
    for (Index j = 0; j < p; ++j) d.column_names.push_back("x" + std::to_string(j));
    d.task = Task::Classification;
    return standardize(d).first;
  }
}

Dataset replicated_column_data(int copies, std::uint64_t seed, Index n) {
  std::mt19937_64 rng(seed);
  const MatrixXd Z = gaussian_matrix(n, 4, rng);
  Dataset d;
  d.task = Task::Regression;
  d.X.resize(n, copies + 3);
  for (int c = 0; c < copies; ++c) d.X.col(c) = Z.col(0);
  d.X.col(copies) = Z.col(1);
  d.X.col(copies + 1) = Z.col(2);
  d.X.col(copies + 2) = Z.col(3);
  d.column_names.push_back("a");
  for (int c = 1; c < copies; ++c) d.column_names.push_back("a_copy" + std::to_string(c));
  d.column_names.insert(d.column_names.end(), {"b", "c", "noise"});
  d.y = 3.0 * Z.col(0) + 2.0 * Z.col(1) - 1.5 * Z.col(2) + 0.3 * gaussian_matrix(n, 1, rng);
  return d;
}

void write_csv(const std::filesystem::path& path, const Dataset& d, const std::string& target) {
  std::ofstream f(path);
  for (const auto& name : d.column_names) f << name << ',';
  f << target << '\n';
  f.precision(17);
  for (Index i = 0; i < d.n(); ++i) {
    for (Index j = 0; j < d.p(); ++j) f << d.X(i, j) << ',';
    f << d.y[i] << '\n';
  }
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lassoeq_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

double lasso_objective_direct(const VectorXd& beta, const MatrixXd& X, const VectorXd& y, double lambda) {
  double rss = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    double r = y[i];
    for (Index j = 0; j < X.cols(); ++j) r -= X(i, j) * beta[j];
    rss += r * r;
  }
  double l1 = 0.0;
  for (Index j = 0; j < beta.size(); ++j) l1 += std::abs(beta[j]);
  return 0.5 * rss + lambda * l1;
}

VectorXd lasso_projected_gradient(const MatrixXd& X, const VectorXd& y, double lambda, double tol, long max_iter) {
  const Index p = X.cols();
  // Smooth problem over w = (u, v) >= 0 with gradient (g + lambda, -g + lambda),
  // g = X^T (X (u - v) - y). Lipschitz constant 2 * ||X||_2^2.
  const double top = Eigen::JacobiSVD<MatrixXd>(X).singularValues()[0];
  const double L = 2.0 * top * top;
  const double step = 1.0 / L;
  VectorXd u = VectorXd::Zero(p), v = VectorXd::Zero(p);
  double f_old = lasso_objective_direct(u - v, X, y, lambda);
  for (long it = 0; it < max_iter; ++it) {
    const VectorXd g = X.transpose() * (X * (u - v) - y);
    u = (u - step * (g.array() + lambda).matrix()).cwiseMax(0.0);
    v = (v - step * ((-g).array() + lambda).matrix()).cwiseMax(0.0);
    const double f = lasso_objective_direct(u - v, X, y, lambda);
    if (std::abs(f_old - f) < tol && it > 10) break;
    f_old = f;
  }
  return u - v;
}

double logistic_objective_direct(const VectorXd& beta, double b0, const MatrixXd& X, const VectorXd& y,
                                 double lambda) {
  double loss = 0.0;
  for (Index i = 0; i < X.rows(); ++i) {
    const double eta = b0 + X.row(i).dot(beta);
    loss += -y[i] * eta + (eta > 0 ? eta + std::log(1.0 + std::exp(-eta)) : std::log(1.0 + std::exp(eta)));
  }
  return loss + lambda * beta.cwiseAbs().sum();
}

namespace {

// Intercept minimizing the logistic loss for fixed coefficients.
double profile_intercept(const VectorXd& beta, const MatrixXd& X, const VectorXd& y, double b0) {
  const VectorXd xb = X * beta;
  for (int it = 0; it < 50; ++it) {
    double g = 0.0, h = 0.0;
    for (Index i = 0; i < X.rows(); ++i) {
      const double pr = 1.0 / (1.0 + std::exp(-(b0 + xb[i])));
      g += pr - y[i];
      h += pr * (1.0 - pr);
    }
    const double delta = g / std::max(h, 1e-12);
    b0 -= delta;
    if (std::abs(delta) < 1e-13) break;
  }
  return b0;
}

}  // namespace

LogisticOracle logistic_grid_oracle(const MatrixXd& X, const VectorXd& y, double lambda) {
  LogisticOracle best;
  best.objective = std::numeric_limits<double>::infinity();
  double c1 = 0.0, c2 = 0.0;
  double half = 5.0, step = 0.05;
  // Each round scans a square around the incumbent, then zooms in. The
  // final round has step 1e-3; a last pass at 1e-5 refines further.
  for (int round = 0; round < 5; ++round) {
    const double s1 = c1, s2 = c2;
    for (double a = s1 - half; a <= s1 + half + 1e-12; a += step) {
      for (double b = s2 - half; b <= s2 + half + 1e-12; b += step) {
        const VectorXd beta = Eigen::Vector2d(a, b);
        const double b0 = profile_intercept(beta, X, y, best.intercept);
        const double f = logistic_objective_direct(beta, b0, X, y, lambda);
        if (f < best.objective) {
          best.objective = f;
          best.beta = Eigen::Vector2d(a, b);
          best.intercept = b0;
          c1 = a;
          c2 = b;
        }
      }
    }
    half = 4.0 * step;
    step /= 10.0;
  }
  return best;
}

std::pair<double, double> vertex_scan_range(const std::vector<VectorXd>& vertices, Index i) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& v : vertices) {
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  return {lo, hi};
}

bool same_point_set(const std::vector<VectorXd>& a, const std::vector<VectorXd>& b, double tol) {
  auto covered = [tol](const std::vector<VectorXd>& from, const std::vector<VectorXd>& in) {
    return std::all_of(from.begin(), from.end(), [&](const VectorXd& x) {
      return std::any_of(in.begin(), in.end(), [&](const VectorXd& y) {
        return x.size() == y.size() && (x - y).lpNorm<Eigen::Infinity>() <= tol;
      });
    });
  };
  return covered(a, b) && covered(b, a);
}

Polytope random_bounded_polytope(std::mt19937_64& rng, Index max_reduced) {
  std::uniform_int_distribution<int> dim_dist(1, static_cast<int>(max_reduced) + 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const Index d = dim_dist(rng);
  const Index min_k = std::max<Index>(0, d - max_reduced);
  std::uniform_int_distribution<int> k_dist(static_cast<int>(min_k), static_cast<int>(std::min<Index>(d, min_k + 2)));
  const Index k = k_dist(rng);

  VectorXd s(d), center(d);
  for (Index i = 0; i < d; ++i) {
    s[i] = coin(rng) ? 1.0 : -1.0;
    center[i] = s[i] * (0.1 + unif(rng));
  }
  // Sometimes make the box reach exactly to zero to create degenerate vertices.
  const double l = coin(rng) ? center.cwiseAbs().maxCoeff() : 0.2 + 1.5 * unif(rng);
  const MatrixXd A = gaussian_matrix(k, d, rng);
  const VectorXd b = A * center;
  return Polytope(A, b, s, Box{center, l}, std::max(1.0, center.lpNorm<Eigen::Infinity>()));
}

double metric_direct(Metric metric, const VectorXd& beta, double intercept, const MatrixXd& X, const VectorXd& y) {
  const Index n = X.rows();
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double eta = intercept + X.row(i).dot(beta);
    if (metric == Metric::Rmse) {
      acc += (y[i] - eta) * (y[i] - eta);
    } else {
      acc += -y[i] * eta + (eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)));
    }
  }
  return metric == Metric::Rmse ? std::sqrt(acc / static_cast<double>(n)) : acc / static_cast<double>(n);
}

std::vector<VectorXd> replay_relaxed(const LassoSolution& ref, Metric metric, double tol, Index d_max,
                                     const MatrixXd& X, const VectorXd& y, bool strict_break) {
  const Index p = X.cols();
  const auto e = static_cast<Index>(ref.support.size());
  MatrixXd X_E(X.rows(), e);
  VectorXd beta_E(e), s(e);
  for (Index k = 0; k < e; ++k) {
    X_E.col(k) = X.col(ref.support[static_cast<std::size_t>(k)]);
    beta_E[k] = ref.beta[ref.support[static_cast<std::size_t>(k)]];
    s[k] = beta_E[k] > 0 ? 1.0 : -1.0;
  }
  const SpectralData sd = thin_svd(X_E);
  const double l = ref.beta.cwiseAbs().maxCoeff();
  const double d_ref = metric_direct(metric, ref.beta, ref.intercept, X, y);
  const double threshold = (1.0 + tol) * d_ref * (1.0 + kMetricRoundingSlack);

  std::vector<VectorXd> all{ref.beta}, clean;
  for (Index i = 1; i <= std::min(d_max, e); ++i) {
    const Index i_star = e - i;
    const MatrixXd V = sd.V.leftCols(i_star);
    const Polytope P(V.transpose(), V.transpose() * beta_E, s, Box{beta_E, l}, std::max(1.0, l));
    std::vector<VectorXd> passing;
    bool broke = false;
    for (const auto& v : brute_force_vertices(P)) {
      VectorXd beta = VectorXd::Zero(p);
      for (Index k = 0; k < e; ++k) beta[ref.support[static_cast<std::size_t>(k)]] = v[k];
      if (metric_direct(metric, beta, ref.intercept, X, y) <= threshold)
        passing.push_back(beta);
      else
        broke = true;
    }
    if (strict_break) {
      if (broke) break;
      clean = passing;
    } else {
      all.insert(all.end(), passing.begin(), passing.end());
      if (broke) break;
    }
  }
  if (strict_break) all.insert(all.end(), clean.begin(), clean.end());
  return sort_and_dedup(all, 1e-9 * std::max(1.0, l));
}

std::vector<VectorXd> solution_betas(const EquivalentSolutionSet& set) {
  std::vector<VectorXd> out;
  for (const auto& s : set.solutions) out.push_back(s.beta);
  return out;
}

}  // namespace lassoeq::testkit
