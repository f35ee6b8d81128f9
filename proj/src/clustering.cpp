#include "qsc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qsc/noise.hpp"
#include "qsc/parallel.hpp"

namespace qsc {

void ClusteringConfig::validate() const {
  if (k < 1) throw std::invalid_argument("clustering: k must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("clustering: max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("clustering: tol must be > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("clustering: delta must be >= 0");
  if (init == InitMethod::provided &&
      (!initial_centroids || initial_centroids->rows() != k))
    throw std::invalid_argument("clustering: provided init needs k initial centroids");
}

Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1 || n < k)
    throw std::invalid_argument("kmeanspp_init: need 1 <= k <= n");
  RngStream rng = keyed_rng(seed, "kmeanspp");
  Eigen::MatrixXd centroids(k, points.cols());
  auto first = static_cast<Eigen::Index>(rng.uniform01() * static_cast<double>(n));
  first = std::min(first, n - 1);
  centroids.row(0) = points.row(first);

  Eigen::VectorXd closest = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = closest.sum();
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform01() * total;
      double running = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        running += closest[i];
        if (running > target) {
          pick = i;
          break;
        }
      }
      // Rounding at the tail: fall back to the last point with weight.
      if (closest[pick] == 0.0) {
        for (Eigen::Index i = n - 1; i >= 0; --i)
          if (closest[i] > 0.0) {
            pick = i;
            break;
          }
      }
    } else {
      pick = std::min(static_cast<Eigen::Index>(rng.uniform01() * static_cast<double>(n)), n - 1);
    }
    centroids.row(c) = points.row(pick);
    closest = closest.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

namespace {

int nearest_exact(const Eigen::MatrixXd& points, Eigen::Index i,
                  const Eigen::MatrixXd& centroids, double* best_d2 = nullptr) {
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
    const double d2 = (points.row(i) - centroids.row(j)).squaredNorm();
    if (d2 < best_val) {
      best_val = d2;
      best = static_cast<int>(j);
    }
  }
  if (best_d2) *best_d2 = best_val;
  return best;
}

double inertia_of(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                  const Eigen::MatrixXd& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  return total;
}

}  // namespace

std::vector<int> noisy_assignment(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                                  double delta, std::uint64_t seed, int iteration,
                                  unsigned threads) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centroids.rows();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx);
    if (!(delta > 0.0)) {
      labels[idx] = nearest_exact(points, i, centroids);
      return;
    }
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
      RngStream rng = keyed_rng(seed, "qmeans-dist",
                                {static_cast<std::uint64_t>(iteration), idx,
                                 static_cast<std::uint64_t>(j)});
      const double d2 =
          (points.row(i) - centroids.row(j)).squaredNorm() + bounded_uniform(rng, delta);
      if (d2 < best_val) {
        best_val = d2;
        best = static_cast<int>(j);
      }
    }
    labels[idx] = best;
  });
  return labels;
}

namespace {

ClusteringResult lloyd(const Eigen::MatrixXd& points, const ClusteringConfig& cfg, double delta) {
  cfg.validate();
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  const int k = cfg.k;
  if (n < k)
    throw std::invalid_argument("clustering: need n >= k (n=" + std::to_string(n) +
                                ", k=" + std::to_string(k) + ")");

  Eigen::MatrixXd centroids = cfg.init == InitMethod::provided
                                  ? *cfg.initial_centroids
                                  : kmeanspp_init(points, k, cfg.seed);
  if (centroids.cols() != dim)
    throw std::invalid_argument("clustering: initial centroid dimension mismatch");

  ClusteringResult result;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  const bool noisy = delta > 0.0;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    labels = noisy_assignment(points, centroids, delta, cfg.seed, iter, cfg.threads);

    Eigen::MatrixXd updated = Eigen::MatrixXd::Zero(k, dim);
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int l = labels[static_cast<std::size_t>(i)];
      updated.row(l) += points.row(i);
      ++counts[static_cast<std::size_t>(l)];
    }
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (int j = 0; j < k; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        updated.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
        continue;
      }
      // Empty cluster: reseed at the point farthest from its own centroid.
      Eigen::Index far = 0;
      double far_d2 = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (taken[static_cast<std::size_t>(i)]) continue;
        const double d2 =
            (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
        if (d2 > far_d2) {
          far_d2 = d2;
          far = i;
        }
      }
      taken[static_cast<std::size_t>(far)] = true;
      updated.row(j) = points.row(far);
    }

    double max_perturbation = 0.0;
    if (noisy) {
      for (int j = 0; j < k; ++j) {
        RngStream rng = keyed_rng(cfg.seed, "qmeans-centroid",
                                  {static_cast<std::uint64_t>(iter), static_cast<std::uint64_t>(j)});
        const Eigen::VectorXd shift = uniform_in_ball(rng, dim, delta);
        max_perturbation = std::max(max_perturbation, shift.norm());
        updated.row(j) += shift.transpose();
      }
    }
    result.centroid_perturbation.push_back(max_perturbation);

    const double movement = (updated - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(updated);
    result.inertia_history.push_back(inertia_of(points, labels, centroids));
    result.iterations_used = iter;
    if (movement < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  for (Eigen::Index i = 0; i < n; ++i)
    labels[static_cast<std::size_t>(i)] = nearest_exact(points, i, centroids);
  result.inertia = inertia_of(points, labels, centroids);
  result.labels = std::move(labels);
  result.centroids = std::move(centroids);
  return result;
}

}  // namespace

ClusteringResult kmeans(const Eigen::MatrixXd& points, const ClusteringConfig& cfg) {
  return lloyd(points, cfg, 0.0);
}

ClusteringResult qmeans(const Eigen::MatrixXd& points, const ClusteringConfig& cfg) {
  return lloyd(points, cfg, cfg.delta);
}

WellClusterableReport check_well_clusterable(const Eigen::MatrixXd& points,
                                             const Eigen::MatrixXd& centroids,
                                             const WellClusterableParams& params) {
  if (centroids.rows() < 1 || centroids.cols() != points.cols())
    throw std::invalid_argument("check_well_clusterable: centroid shape mismatch");
  WellClusterableReport report;

  report.min_separation = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centroids.rows(); ++i)
    for (Eigen::Index j = i + 1; j < centroids.rows(); ++j)
      report.min_separation =
          std::min(report.min_separation, (centroids.row(i) - centroids.row(j)).norm());
  report.separation = report.min_separation >= params.xi;

  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double d2 = 0.0;
    nearest_exact(points, i, centroids, &d2);
    if (std::sqrt(d2) <= params.beta) ++report.points_within_beta;
  }
  report.required_points = params.lambda_frac * static_cast<double>(points.rows());
  report.proximity = static_cast<double>(report.points_within_beta) >= report.required_points;

  const double sqrt_eta = std::sqrt(params.eta_bound);
  const double lambda = params.lambda_frac;
  report.inequality_lhs =
      4.0 * sqrt_eta *
      std::sqrt(lambda * params.beta * params.beta + (1.0 - lambda) * 4.0 * params.eta_bound);
  report.inequality_rhs = params.xi * params.xi - 2.0 * sqrt_eta * params.beta;
  report.intra_vs_inter = report.inequality_lhs <= report.inequality_rhs;
  return report;
}

namespace {

std::size_t best_matches(std::span<const int> labels, std::span<const int> truth) {
  if (labels.size() != truth.size())
    throw std::invalid_argument("clustering_accuracy: length mismatch");
  if (labels.empty()) throw std::invalid_argument("clustering_accuracy: empty labels");
  int classes = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || truth[i] < 0)
      throw std::invalid_argument("clustering_accuracy: negative label");
    classes = std::max({classes, labels[i] + 1, truth[i] + 1});
  }
  const auto kk = static_cast<std::size_t>(classes);
  std::vector<std::size_t> table(kk * kk, 0);  // [pred][truth]
  for (std::size_t i = 0; i < labels.size(); ++i)
    ++table[static_cast<std::size_t>(labels[i]) * kk + static_cast<std::size_t>(truth[i])];

  std::size_t best = 0;
  if (classes <= 8) {
    std::vector<int> perm(kk);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::size_t matches = 0;
      for (std::size_t p = 0; p < kk; ++p) matches += table[p * kk + static_cast<std::size_t>(perm[p])];
      best = std::max(best, matches);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  std::vector<bool> row_used(kk, false), col_used(kk, false);
  for (std::size_t step = 0; step < kk; ++step) {
    std::size_t br = 0, bc = 0, bv = 0;
    bool found = false;
    for (std::size_t r = 0; r < kk; ++r)
      for (std::size_t c = 0; c < kk; ++c)
        if (!row_used[r] && !col_used[c] && (!found || table[r * kk + c] > bv)) {
          br = r, bc = c, bv = table[r * kk + c], found = true;
        }
    row_used[br] = col_used[bc] = true;
    best += bv;
  }
  return best;
}

}  // namespace

double clustering_accuracy(std::span<const int> labels, std::span<const int> truth) {
  return static_cast<double>(best_matches(labels, truth)) / static_cast<double>(labels.size());
}

std::size_t misclassified_count(std::span<const int> labels, std::span<const int> truth) {
  return labels.size() - best_matches(labels, truth);
}

}  // namespace qsc
