#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsc/graph.hpp"

using namespace qsc;

namespace {

SimilarityGraph path3() {
  Eigen::MatrixXi adj(3, 3);
  adj << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return SimilarityGraph::from_adjacency(adj);
}

SimilarityGraph triangle() {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Ones(3, 3);
  adj.diagonal().setZero();
  return SimilarityGraph::from_adjacency(adj);
}

}  // namespace

TEST_CASE("threshold rule on collinear points") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0, 1, 10;
  // from_points rejects the zero row, so shift the line off the origin
  pts.array() += 5;
  const SimilarityGraph g = build_adjacency(DataMatrix::from_points(pts), 2.0);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == std::pair<int, int>{0, 1});
  CHECK(g.adjacency(0, 1) == 1);
  CHECK(g.adjacency(1, 0) == 1);
  CHECK(g.adjacency.diagonal().sum() == 0);
}

TEST_CASE("d_min above the diameter gives the complete graph") {
  CirclesParams p;
  p.n = 30;
  p.seed = 2;
  const SimilarityGraph g = build_adjacency(make_circles(p), 100.0);
  CHECK(g.edge_count() == 30u * 29u / 2u);
  CHECK((g.degrees().array() == 29).all());
  CHECK_THROWS_AS(build_adjacency(make_circles(p), 0.0), std::invalid_argument);
}

TEST_CASE("edges are the lexicographic list of adjacent pairs") {
  std::mt19937_64 gen(8);
  const Eigen::MatrixXi adj = oracle::random_graph(9, 0.4, gen, false);
  const SimilarityGraph g = SimilarityGraph::from_adjacency(adj);
  std::vector<std::pair<int, int>> expected;
  for (int p = 0; p < 9; ++p)
    for (int q = p + 1; q < 9; ++q)
      if (adj(p, q)) expected.emplace_back(p, q);
  CHECK(g.edges == expected);

  Eigen::MatrixXi bad = adj;
  bad(0, 1) = 1;
  bad(1, 0) = 0;
  CHECK_THROWS_AS(SimilarityGraph::from_adjacency(bad), std::invalid_argument);
}

TEST_CASE("distance estimates") {
  RngStream rng = keyed_rng(0, "t");
  Eigen::Vector2d a(0, 0), b(3, 4);
  CHECK(estimate_sq_distance(a, a, 0.0, rng) == 0.0);
  CHECK(estimate_sq_distance(a, b, 0.0, rng) == 25.0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double d2 = estimate_sq_distance(a, b, 0.1, rng);
    REQUIRE(d2 >= 24.9);
    REQUIRE(d2 <= 25.1);
    sum += d2;
  }
  CHECK(std::abs(sum / 100000 - 25.0) < 0.01);
}

TEST_CASE("incidence rows by hand") {
  const SimilarityGraph g = path3();
  const IncidenceView v{&g, 0.0};
  CHECK(incidence_row(v, 0) == Eigen::Vector3d(1, 0, 0));
  CHECK(incidence_row(v, 1) == Eigen::Vector3d(-1, 0, 1));
  CHECK(incidence_row(v, 2) == Eigen::Vector3d(0, 0, -1));

  const SimilarityGraph t = triangle();
  const IncidenceView vt{&t, 0.1};
  CHECK(incidence_row(vt, 0) == Eigen::Vector3d(1, 1, 0.1));

  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(3, 3);
  adj(0, 1) = adj(1, 0) = 1;
  const SimilarityGraph iso = SimilarityGraph::from_adjacency(adj);
  CHECK(incidence_row(IncidenceView{&iso, 0.0}, 2).isZero());
  CHECK_THROWS_AS(normalized_laplacian(IncidenceView{&iso, 0.0}), std::invalid_argument);
}

TEST_CASE("row norms follow degree and filler count") {
  std::mt19937_64 gen(4);
  for (double eps : {0.0, 0.1, 0.5}) {
    const SimilarityGraph g = SimilarityGraph::from_adjacency(oracle::random_graph(8, 0.3, gen, false));
    const IncidenceView v{&g, eps};
    const Eigen::MatrixXd b = oracle::incidence(g.adjacency, eps);
    CHECK((v.row_sq_norms() - b.rowwise().squaredNorm()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((materialize_incidence(v) - b).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("path graph normalized Laplacian") {
  const SimilarityGraph g = path3();
  const Eigen::MatrixXd l = normalized_laplacian(IncidenceView{&g, 0.0});
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3d expected;
  expected << 1, -s, 0, -s, 1, -s, 0, -s, 1;
  CHECK((l - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closed form matches the brute-force Gram matrix") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> size(2, 12);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = size(gen);
    for (double eps : {0.0, 0.1}) {
      const Eigen::MatrixXi adj = oracle::random_graph(n, density(gen), gen, true);
      const SimilarityGraph g = SimilarityGraph::from_adjacency(adj);
      const Eigen::MatrixXd closed = normalized_laplacian(IncidenceView{&g, eps});
      const Eigen::MatrixXd brute = oracle::gram_laplacian(adj, eps);
      REQUIRE((closed - brute).cwiseAbs().maxCoeff() < 1e-10);
      if (eps == 0.0) CHECK((closed - oracle::sym_normalized(adj)).cwiseAbs().maxCoeff() < 1e-10);
      ++checked;
    }
  }
  CHECK(checked >= 200);
}

TEST_CASE("Laplacian is PSD with unit diagonal; zero multiplicity counts components") {
  // two disjoint triangles
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(6, 6);
  for (int base : {0, 3})
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q)
        if (p != q) adj(base + p, base + q) = 1;
  const SimilarityGraph g = SimilarityGraph::from_adjacency(adj);
  for (double eps : {0.0, 0.1}) {
    const Eigen::MatrixXd l = normalized_laplacian(IncidenceView{&g, eps});
    CHECK((l.diagonal().array() - 1.0).abs().maxCoeff() < 1e-14);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l).eigenvalues();
    CHECK(ev.minCoeff() > -1e-12);
    if (eps == 0.0) {
      CHECK(ev.maxCoeff() < 2.0 + 1e-12);
      CHECK((ev.array().abs() < 1e-10).count() == 2);
    }
  }
}

TEST_CASE("noisy adjacency differs only near the threshold") {
  CirclesParams p;
  p.n = 600;
  p.seed = 21;
  const DataMatrix data = rescale_min_norm(make_circles(p));
  const double d_min = 0.6;
  const SimilarityGraph exact = build_adjacency(data, d_min);
  NoiseProfile noise = NoiseProfile::quantum_defaults(77);
  const SimilarityGraph noisy = build_adjacency(data, d_min, noise);
  int differing = 0;
  for (int a = 0; a < 600; ++a)
    for (int b = a + 1; b < 600; ++b) {
      const double d2 = (data.points.row(a) - data.points.row(b)).squaredNorm();
      if (std::abs(d2 - d_min * d_min) > noise.eps_dist)
        REQUIRE(noisy.adjacency(a, b) == exact.adjacency(a, b));
      differing += noisy.adjacency(a, b) != exact.adjacency(a, b);
    }
  CHECK(differing > 0);
  CHECK(noisy.adjacency == noisy.adjacency.transpose());

  // eps_dist = 0 is the exact rule regardless of seed
  noise.eps_dist = 0.0;
  CHECK(build_adjacency(data, d_min, noise).adjacency == exact.adjacency);
}

TEST_CASE("adjacency does not depend on the thread count") {
  CirclesParams p;
  p.n = 300;
  p.seed = 5;
  const DataMatrix data = make_circles(p);
  const NoiseProfile noise = NoiseProfile::quantum_defaults(3);
  const SimilarityGraph one = build_adjacency(data, 0.6, noise, GraphBuildOptions{1});
  const SimilarityGraph four = build_adjacency(data, 0.6, noise, GraphBuildOptions{4});
  CHECK(one.adjacency == four.adjacency);
  CHECK(one.edges == four.edges);
}
