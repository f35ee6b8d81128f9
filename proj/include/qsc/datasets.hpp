#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qsc {

/// Row-major point set S (n x d); rows are the input vectors.
struct DataMatrix {
  Eigen::MatrixXd points;
  Eigen::VectorXd row_norms;
  std::optional<std::vector<int>> ground_truth;

  Eigen::Index n() const { return points.rows(); }
  Eigen::Index d() const { return points.cols(); }

  /// Builds the struct, computing row norms and checking the invariants
  /// (n >= 2, d >= 1, finite nonzero rows, labels sized n and nonnegative).
  static DataMatrix from_points(Eigen::MatrixXd points,
                                std::optional<std::vector<int>> labels = {});
};

struct CirclesParams {
  int n = 600;
  double radius_inner = 1.0;
  double radius_outer = 2.0;
  double noise_sd = 0.05;
  std::uint64_t seed = 0;
};

/// Two concentric circles, n/2 points each, angles uniform, isotropic
/// Gaussian coordinate noise. Inner circle is label 0.
DataMatrix make_circles(const CirclesParams& params);

/// Divides every row by the smallest row norm so that min_i |s_i| = 1.
DataMatrix rescale_min_norm(const DataMatrix& data);

/// Reads comma-separated reals, one point per row. A non-numeric first line
/// is treated as a header. With `has_labels` the last column is an integer
/// label.
DataMatrix read_csv(const std::filesystem::path& path, bool has_labels);
void write_csv(const std::filesystem::path& path, const DataMatrix& data);

}  // namespace qsc
