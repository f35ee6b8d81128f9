#include "qsc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qsc/errors.hpp"
#include "qsc/format.hpp"
#include "qsc/noise.hpp"

namespace qsc {

SpectralModel eigendecompose(const Eigen::MatrixXd& laplacian) {
  if (laplacian.rows() != laplacian.cols() || laplacian.rows() == 0)
    throw NumericalError("eigendecompose: matrix must be square and nonempty");
  const double asym = (laplacian - laplacian.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-10))
    throw NumericalError("eigendecompose: matrix not symmetric (max |L - L^T| = " +
                         format_double(asym) + ")");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigendecompose: symmetric eigensolver did not converge");

  SpectralModel model;
  model.eigenvalues = solver.eigenvalues();
  model.eigenvectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < model.eigenvectors.cols(); ++j) {
    auto col = model.eigenvectors.col(j);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > 1e-10) {
        if (col[i] < 0.0) col = -col;
        break;
      }
    }
  }
  return model;
}

SpectralModel estimate_singular_values(SpectralModel model, double eps_lambda,
                                       std::uint64_t seed, EigenNoiseMode mode) {
  if (!(eps_lambda >= 0.0)) throw std::invalid_argument("eps_lambda must be >= 0");
  Eigen::VectorXd estimates(model.n());
  for (Eigen::Index j = 0; j < model.n(); ++j) {
    const double lambda = model.eigenvalues[j];
    if (eps_lambda == 0.0) {
      estimates[j] = lambda;
      continue;
    }
    const double singular = std::sqrt(std::max(lambda, 0.0));
    RngStream rng = keyed_rng(seed, "eig", {static_cast<std::uint64_t>(j)});
    const double bound = mode == EigenNoiseMode::absolute ? eps_lambda : eps_lambda * singular;
    const double noisy = std::max(0.0, singular + bounded_uniform(rng, bound));
    estimates[j] = noisy * noisy;
  }
  model.noisy_eigenvalues = std::move(estimates);
  return model;
}

Selection select_k_lowest(const SpectralModel& model, int k, double gamma) {
  const auto n = static_cast<int>(model.n());
  if (k < 1 || k >= n)
    throw std::invalid_argument("select_k_lowest: need 1 <= k < n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  if (!(gamma > 1.0)) throw std::invalid_argument("select_k_lowest: gamma must be > 1");
  const Eigen::VectorXd& values = model.working_eigenvalues();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });

  Selection sel;
  sel.indices.assign(order.begin(), order.begin() + k);
  const double kth = values[order[static_cast<std::size_t>(k - 1)]];
  const double next = values[order[static_cast<std::size_t>(k)]];
  sel.nu = std::min(gamma * kth, 0.5 * (kth + next));
  return sel;
}

SpectralModel apply_selection(SpectralModel model, const Selection& selection, double gamma) {
  model.k = static_cast<int>(selection.indices.size());
  model.nu = selection.nu;
  model.gamma = gamma;
  model.selected = selection.indices;
  return model;
}

Embedding project_classical(const SpectralModel& model, int k) {
  if (k < 1 || k > model.n())
    throw std::invalid_argument("project_classical: need 1 <= k <= n");
  Embedding emb;
  emb.kind = EmbeddingKind::classical_columns;
  emb.rows = model.eigenvectors.leftCols(k);
  emb.row_norms = emb.rows.rowwise().norm();
  return emb;
}

Embedding project_quantum(const SpectralModel& model, double norm_rel_err,
                          std::uint64_t seed) {
  if (model.selected.empty())
    throw std::invalid_argument("project_quantum: no eigenvalue selection");
  if (!(norm_rel_err >= 0.0)) throw std::invalid_argument("norm_rel_err must be >= 0");
  const Eigen::VectorXd& values = model.working_eigenvalues();
  const Eigen::Index n = model.n();
  const auto k = static_cast<Eigen::Index>(model.selected.size());

  Embedding emb;
  emb.kind = EmbeddingKind::quantum_lambda_scaled;
  emb.rows.resize(n, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const int j = model.selected[static_cast<std::size_t>(c)];
    emb.rows.col(c) = model.eigenvectors.col(j) * values[j];
  }

  Eigen::VectorXd p00(n);
  emb.row_norms.resize(n);
  const double nu2 = model.nu * model.nu;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sq = emb.rows.row(i).squaredNorm();
    p00[i] = nu2 > 0.0 ? sq / nu2 : 0.0;
    if (p00[i] < kP00FlagThreshold) emb.flagged_rows.push_back(static_cast<int>(i));
    double norm = model.nu * std::sqrt(p00[i]);
    if (norm_rel_err > 0.0) {
      RngStream rng = keyed_rng(seed, "norm", {static_cast<std::uint64_t>(i)});
      norm *= 1.0 + bounded_uniform(rng, norm_rel_err);
    }
    emb.row_norms[i] = norm;
  }
  emb.p00 = std::move(p00);
  return emb;
}

Embedding normalize_rows(Embedding embedding) {
  for (Eigen::Index i = 0; i < embedding.rows.rows(); ++i) {
    const double norm = embedding.rows.row(i).norm();
    if (norm > 0.0) embedding.rows.row(i) /= norm;
  }
  embedding.row_norms = embedding.rows.rowwise().norm();
  return embedding;
}

void write_embedding_csv(const std::filesystem::path& path, const Embedding& embedding,
                         std::span<const int> labels) {
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != embedding.rows.rows())
    throw std::invalid_argument("write_embedding_csv: label count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index c = 0; c < embedding.rows.cols(); ++c) out << 'x' << c << ',';
  out << "norm";
  if (embedding.p00) out << ",p00";
  if (!labels.empty()) out << ",label";
  out << '\n';
  for (Eigen::Index i = 0; i < embedding.rows.rows(); ++i) {
    for (Eigen::Index c = 0; c < embedding.rows.cols(); ++c)
      out << format_double(embedding.rows(i, c)) << ',';
    out << format_double(embedding.row_norms[i]);
    if (embedding.p00) out << ',' << format_double((*embedding.p00)[i]);
    if (!labels.empty()) out << ',' << labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qsc
