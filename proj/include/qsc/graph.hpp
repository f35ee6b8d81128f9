#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsc/datasets.hpp"
#include "qsc/noise.hpp"

namespace qsc {

/// Threshold similarity graph: a_pq = 1 iff the (possibly noisy) squared
/// distance is <= d_min^2.
struct SimilarityGraph {
  Eigen::Index n = 0;
  Eigen::MatrixXi adjacency;  // symmetric 0/1, zero diagonal
  std::vector<std::pair<int, int>> edges;  // p < q, lexicographic
  double d_min = 0.0;

  Eigen::VectorXi degrees() const { return adjacency.rowwise().sum(); }
  /// Signed degree: sum over neighbours q of +1 if i < q else -1. This is the
  /// row sum of the oriented incidence matrix.
  Eigen::VectorXi net_orientation() const;
  std::size_t edge_count() const { return edges.size(); }

  /// Builds from an explicit adjacency matrix (validated).
  static SimilarityGraph from_adjacency(Eigen::MatrixXi adjacency, double d_min = 0.0);
};

/// Implicit view of the n x n(n-1)/2 incidence matrix with every zero entry
/// replaced by eps_B. Columns are the pairs (p, q), p < q, in lexicographic
/// order.
struct IncidenceView {
  const SimilarityGraph* graph = nullptr;
  double eps_B = 0.0;

  Eigen::Index rows() const { return graph->n; }
  std::int64_t cols() const {
    const std::int64_t n = graph->n;
    return n * (n - 1) / 2;
  }
  /// Entry B_{i,(p,q)}.
  double entry(Eigen::Index i, int p, int q) const;
  /// ||B_i||^2 = deg(i) + (N - deg(i)) eps_B^2.
  Eigen::VectorXd row_sq_norms() const;
};

inline constexpr std::int64_t kMaxMaterializedColumns = 10'000'000;

struct GraphBuildOptions {
  unsigned threads = 1;
};

/// Squared distance plus a single U(-eps_dist, eps_dist) draw.
double estimate_sq_distance(const Eigen::Ref<const Eigen::VectorXd>& s_p,
                            const Eigen::Ref<const Eigen::VectorXd>& s_q,
                            double eps_dist, RngStream& rng);

/// Classical mode uses exact squared distances. In quantum mode each
/// unordered pair (p, q) gets one noise draw from keyed_rng(seed, "dist", p, q),
/// so the result is symmetric and independent of the thread count.
SimilarityGraph build_adjacency(const DataMatrix& data, double d_min,
                                const std::optional<NoiseProfile>& noise = std::nullopt,
                                const GraphBuildOptions& options = {});

/// Dense row i of B. Test/small-n helper; rejects more than
/// kMaxMaterializedColumns columns.
Eigen::VectorXd incidence_row(const IncidenceView& view, Eigen::Index i);

/// Dense B (all rows). Same guard as incidence_row.
Eigen::MatrixXd materialize_incidence(const IncidenceView& view);

/// Normalized Laplacian L = BB^T with unit-norm rows of B, from the closed
/// form in degrees, signed degrees and eps_B. O(n^2); B is never formed.
Eigen::MatrixXd normalized_laplacian(const IncidenceView& view);

/// One "p q" line per edge, zero-indexed.
void write_edge_list(const std::filesystem::path& path, const SimilarityGraph& graph);

}  // namespace qsc
