#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsc {

enum class InitMethod { kmeanspp, provided };

struct ClusteringConfig {
  int k = 2;
  double delta = 0.0;  // q-means precision; ignored by kmeans()
  int max_iters = 100;
  double tol = 1e-4;   // max centroid displacement
  InitMethod init = InitMethod::kmeanspp;
  std::optional<Eigen::MatrixXd> initial_centroids;  // for InitMethod::provided
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

struct ClusteringResult {
  Eigen::MatrixXd centroids;  // k x dim
  std::vector<int> labels;    // nearest centroid, exact distances
  int iterations_used = 0;
  bool converged = false;
  double inertia = 0.0;
  /// Inertia of (labels_t, centroids_{t+1}) after each update step.
  std::vector<double> inertia_history;
  /// Largest ||c_bar - c|| applied by the read-out noise, per iteration.
  std::vector<double> centroid_perturbation;
};

/// Lloyd's algorithm with exact distances. Stops when the largest centroid
/// displacement drops below tol or after max_iters. An empty cluster is
/// reseeded at the point farthest from its assigned centroid.
ClusteringResult kmeans(const Eigen::MatrixXd& points, const ClusteringConfig& cfg);

/// Noisy Lloyd iterations: each squared distance used for assignment gets an
/// independent U(-delta, delta) draw keyed by (iteration, point, centroid),
/// and each updated centroid is moved by a uniform sample of the delta ball.
/// With delta = 0 the output is bitwise identical to kmeans() with the same
/// config.
ClusteringResult qmeans(const Eigen::MatrixXd& points, const ClusteringConfig& cfg);

/// One q-means assignment step: nearest centroid under squared distances
/// perturbed by U(-delta, delta), keyed by (iteration, point, centroid).
/// delta = 0 gives the exact assignment.
std::vector<int> noisy_assignment(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                                  double delta, std::uint64_t seed, int iteration,
                                  unsigned threads = 1);

/// D^2 sampling seeded from keyed_rng(seed, "kmeanspp").
Eigen::MatrixXd kmeanspp_init(const Eigen::MatrixXd& points, int k, std::uint64_t seed);

struct WellClusterableParams {
  double xi = 0.0;
  double beta = 0.0;
  double lambda_frac = 1.0;
  double eta_bound = 1.0;
};

struct WellClusterableReport {
  bool separation = false;     // d(c_i, c_j) >= xi for all i != j
  bool proximity = false;      // >= lambda n points within beta of nearest centroid
  bool intra_vs_inter = false; // 4 sqrt(eta) sqrt(lambda beta^2 + (1-lambda) 4 eta) <= xi^2 - 2 sqrt(eta) beta
  double min_separation = 0.0;
  std::size_t points_within_beta = 0;
  double required_points = 0.0;
  double inequality_lhs = 0.0;
  double inequality_rhs = 0.0;

  bool all() const { return separation && proximity && intra_vs_inter; }
};

WellClusterableReport check_well_clusterable(const Eigen::MatrixXd& points,
                                             const Eigen::MatrixXd& centroids,
                                             const WellClusterableParams& params);

/// Fraction of points whose predicted label matches the truth under the best
/// relabeling of the predictions. Exact enumeration for up to 8 labels, a
/// greedy contingency matching above that.
double clustering_accuracy(std::span<const int> labels, std::span<const int> truth);
/// n minus the number of matches under the best relabeling.
std::size_t misclassified_count(std::span<const int> labels, std::span<const int> truth);

}  // namespace qsc
