#include "qsc/graph.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "qsc/parallel.hpp"

namespace qsc {

Eigen::VectorXi SimilarityGraph::net_orientation() const {
  Eigen::VectorXi net = Eigen::VectorXi::Zero(n);
  for (const auto& [p, q] : edges) {
    ++net[p];
    --net[q];
  }
  return net;
}

SimilarityGraph SimilarityGraph::from_adjacency(Eigen::MatrixXi adjacency, double d_min) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("adjacency must be square");
  SimilarityGraph g;
  g.n = adjacency.rows();
  g.d_min = d_min;
  for (Eigen::Index p = 0; p < g.n; ++p) {
    if (adjacency(p, p) != 0) throw std::invalid_argument("adjacency diagonal must be zero");
    for (Eigen::Index q = p + 1; q < g.n; ++q) {
      const int a = adjacency(p, q);
      if (a != adjacency(q, p) || (a != 0 && a != 1))
        throw std::invalid_argument("adjacency must be symmetric 0/1");
      if (a) g.edges.emplace_back(static_cast<int>(p), static_cast<int>(q));
    }
  }
  g.adjacency = std::move(adjacency);
  return g;
}

double IncidenceView::entry(Eigen::Index i, int p, int q) const {
  if (!(p < q)) throw std::invalid_argument("incidence column requires p < q");
  if (graph->adjacency(p, q) != 0) {
    if (i == p) return 1.0;
    if (i == q) return -1.0;
  }
  return eps_B;
}

Eigen::VectorXd IncidenceView::row_sq_norms() const {
  const double total = static_cast<double>(cols());
  const Eigen::VectorXd deg = graph->degrees().cast<double>();
  return (deg.array() + (total - deg.array()) * eps_B * eps_B).matrix();
}

double estimate_sq_distance(const Eigen::Ref<const Eigen::VectorXd>& s_p,
                            const Eigen::Ref<const Eigen::VectorXd>& s_q,
                            double eps_dist, RngStream& rng) {
  if (!(eps_dist >= 0.0)) throw std::invalid_argument("eps_dist must be >= 0");
  const double d2 = (s_p - s_q).squaredNorm();
  return d2 + bounded_uniform(rng, eps_dist);
}

SimilarityGraph build_adjacency(const DataMatrix& data, double d_min,
                                const std::optional<NoiseProfile>& noise,
                                const GraphBuildOptions& options) {
  if (!(d_min > 0.0)) throw std::invalid_argument("d_min must be > 0");
  const Eigen::Index n = data.n();
  const double threshold = d_min * d_min;
  const bool noisy = noise && noise->mode == Mode::quantum && noise->eps_dist > 0.0;
  const double eps = noisy ? noise->eps_dist : 0.0;
  const std::uint64_t seed = noise ? noise->seed : 0;

  Eigen::MatrixXi adjacency = Eigen::MatrixXi::Zero(n, n);
  // Row p owns the pairs (p, q > p); rows are written by one worker each.
  parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t row) {
    const auto p = static_cast<Eigen::Index>(row);
    for (Eigen::Index q = p + 1; q < n; ++q) {
      double d2;
      if (noisy) {
        RngStream rng = keyed_rng(seed, "dist",
                                  {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q)});
        d2 = estimate_sq_distance(data.points.row(p).transpose(),
                                  data.points.row(q).transpose(), eps, rng);
      } else {
        d2 = (data.points.row(p) - data.points.row(q)).squaredNorm();
      }
      adjacency(p, q) = d2 <= threshold ? 1 : 0;
    }
  });
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) adjacency(q, p) = adjacency(p, q);
  return SimilarityGraph::from_adjacency(std::move(adjacency), d_min);
}

Eigen::VectorXd incidence_row(const IncidenceView& view, Eigen::Index i) {
  if (i < 0 || i >= view.rows()) throw std::out_of_range("incidence_row: node index");
  if (view.cols() > kMaxMaterializedColumns)
    throw std::length_error("incidence_row: " + std::to_string(view.cols()) +
                            " columns exceeds the materialization guard");
  const auto n = static_cast<int>(view.rows());
  Eigen::VectorXd row(static_cast<Eigen::Index>(view.cols()));
  Eigen::Index col = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) row[col++] = view.entry(i, p, q);
  return row;
}

Eigen::MatrixXd materialize_incidence(const IncidenceView& view) {
  if (view.cols() > kMaxMaterializedColumns || view.rows() * view.cols() > kMaxMaterializedColumns)
    throw std::length_error("materialize_incidence: matrix exceeds the materialization guard");
  Eigen::MatrixXd b(view.rows(), static_cast<Eigen::Index>(view.cols()));
  for (Eigen::Index i = 0; i < view.rows(); ++i) b.row(i) = incidence_row(view, i).transpose();
  return b;
}

Eigen::MatrixXd normalized_laplacian(const IncidenceView& view) {
  const SimilarityGraph& g = *view.graph;
  const Eigen::Index n = g.n;
  const double eps = view.eps_B;
  const double eps2 = eps * eps;
  const double total = static_cast<double>(view.cols());
  const Eigen::VectorXi deg = g.degrees();
  const Eigen::VectorXi net = g.net_orientation();
  const Eigen::VectorXd sq_norms = view.row_sq_norms();

  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(sq_norms[i] > 0.0))
      throw std::invalid_argument("normalized_laplacian: node " + std::to_string(i) +
                                  " is isolated and eps_B = 0");
  }
  const Eigen::VectorXd inv_norm = sq_norms.cwiseSqrt().cwiseInverse();

  // Columns split into: the pair (i, j) itself; pairs touching exactly one of
  // i, j (B_i or B_j contributes eps_B times the other row's value); pairs
  // touching neither (eps_B^2 each). Summing gives, for i != j,
  //   <B_i, B_j> = -a + (1 - a) eps^2 + eps (net_i + net_j)
  //                + eps^2 (N - 1 - deg_i - deg_j + 2a).
  Eigen::MatrixXd lap(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lap(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double a = g.adjacency(i, j);
      const double gram = -a + (1.0 - a) * eps2 + eps * (net[i] + net[j]) +
                          eps2 * (total - 1.0 - deg[i] - deg[j] + 2.0 * a);
      const double value = gram * inv_norm[i] * inv_norm[j];
      lap(i, j) = value;
      lap(j, i) = value;
    }
  }
  return lap;
}

void write_edge_list(const std::filesystem::path& path, const SimilarityGraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [p, q] : graph.edges) out << p << ' ' << q << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qsc
