#pragma once

// Independent reference computations used by the tests. Everything here is
// written the slow, direct way and shares no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

/// Incidence matrix written entry by entry: columns are pairs p < q in
/// lexicographic order; +1 at p and -1 at q for an edge; every other entry
/// is eps.
inline Eigen::MatrixXd incidence(const Eigen::MatrixXi& adj, double eps) {
  const int n = static_cast<int>(adj.rows());
  Eigen::MatrixXd b(n, n * (n - 1) / 2);
  int col = 0;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q, ++col)
      for (int i = 0; i < n; ++i) {
        double v = eps;
        if (adj(p, q) == 1 && i == p) v = 1.0;
        if (adj(p, q) == 1 && i == q) v = -1.0;
        b(i, col) = v;
      }
  return b;
}

inline Eigen::MatrixXd row_normalize(Eigen::MatrixXd m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).norm();
  return m;
}

/// Normalized Laplacian as the Gram matrix of the row-normalized incidence.
inline Eigen::MatrixXd gram_laplacian(const Eigen::MatrixXi& adj, double eps) {
  const Eigen::MatrixXd nb = row_normalize(incidence(adj, eps));
  return nb * nb.transpose();
}

/// D^{-1/2} (D - A) D^{-1/2}.
inline Eigen::MatrixXd sym_normalized(const Eigen::MatrixXi& adj) {
  const Eigen::MatrixXd a = adj.cast<double>();
  const Eigen::VectorXd deg = a.rowwise().sum();
  Eigen::MatrixXd l = Eigen::MatrixXd(deg.asDiagonal()) - a;
  const Eigen::VectorXd s = deg.cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * l * s.asDiagonal();
}

inline Eigen::MatrixXi random_graph(int n, double density, std::mt19937_64& gen,
                                    bool no_isolated) {
  std::bernoulli_distribution coin(density);
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      if (coin(gen)) adj(p, q) = adj(q, p) = 1;
  if (no_isolated)
    for (int i = 0; i < n; ++i)
      if (adj.row(i).sum() == 0) {
        const int j = (i + 1) % n;
        adj(i, j) = adj(j, i) = 1;
      }
  return adj;
}

/// s_r(M) = max_i sum_j |M_ij|^r over nonzero entries.
inline double s_r(const Eigen::MatrixXd& m, double r) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) sum += std::pow(std::abs(m(i, j)), r);
    best = std::max(best, sum);
  }
  return best;
}

/// mu by a fine uniform scan of p (no refinement).
inline double mu_scan(const Eigen::MatrixXd& m, int steps = 4000) {
  double best = m.norm();
  for (int s = 0; s <= steps; ++s) {
    const double p = static_cast<double>(s) / steps;
    best = std::min(best, std::sqrt(s_r(m, 2 * p) * s_r(m.transpose(), 2 * (1 - p))));
  }
  return best;
}

/// Accuracy by brute force over all label permutations (k <= 6).
inline double accuracy(const std::vector<int>& labels, const std::vector<int>& truth, int k) {
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += perm[labels[i]] == truth[i];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(labels.size());
}

/// OLS slope of log y on log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
