#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qsc {

/// Full eigendecomposition of the normalized Laplacian plus the state of the
/// eigenvalue-selection step.
///
/// Column j of `eigenvectors` is u_{j+1}; its i-th entry is the coordinate
/// sigma_ij of e_i in the eigenbasis. `noisy_eigenvalues`, when present, holds
/// estimates obtained by perturbing the singular values sqrt(lambda_j) of the
/// normalized incidence matrix and squaring.
struct SpectralModel {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  int k = 0;
  double nu = 0.0;
  double gamma = 1.1;
  std::optional<Eigen::VectorXd> noisy_eigenvalues;
  std::vector<int> selected;  // indices into eigenvalues, ascending estimate

  Eigen::Index n() const { return eigenvalues.size(); }
  /// Estimates if present, exact eigenvalues otherwise.
  const Eigen::VectorXd& working_eigenvalues() const {
    return noisy_eigenvalues ? *noisy_eigenvalues : eigenvalues;
  }
};

enum class EigenNoiseMode { absolute, relative };

enum class EmbeddingKind { classical_columns, quantum_lambda_scaled };

struct Embedding {
  Eigen::MatrixXd rows;       // n x k
  Eigen::VectorXd row_norms;  // reported norms (noisy in quantum mode)
  EmbeddingKind kind = EmbeddingKind::classical_columns;
  std::optional<Eigen::VectorXd> p00;  // quantum only
  std::vector<int> flagged_rows;       // quantum only: P_i(00) < 1e-12
};

inline constexpr double kP00FlagThreshold = 1e-12;

/// Dense symmetric eigensolver. Eigenvalues ascending; each eigenvector's
/// first component with |x| > 1e-10 is made positive. Throws NumericalError
/// if L is not symmetric to 1e-10 or the solver fails.
SpectralModel eigendecompose(const Eigen::MatrixXd& laplacian);

/// lambda_bar_j = max(0, sqrt(lambda_j) + e_j)^2 with e_j ~ U(-eps, eps)
/// (absolute) or e_j = sqrt(lambda_j) U(-eps, eps) (relative). One draw per
/// eigenvalue from keyed_rng(seed, "eig", j).
SpectralModel estimate_singular_values(SpectralModel model, double eps_lambda,
                                       std::uint64_t seed,
                                       EigenNoiseMode mode = EigenNoiseMode::absolute);

struct Selection {
  std::vector<int> indices;
  double nu = 0.0;
};

/// Picks the k smallest working eigenvalues (stable in index) and sets
/// nu = min(gamma * lambda_(k), (lambda_(k) + lambda_(k+1)) / 2).
Selection select_k_lowest(const SpectralModel& model, int k, double gamma = 1.1);

/// Stores the selection in the model (k, nu, gamma, selected).
SpectralModel apply_selection(SpectralModel model, const Selection& selection, double gamma);

/// Rows are the first k eigenvector coordinates (u_1..u_k).
Embedding project_classical(const SpectralModel& model, int k);

/// Rows are sigma_ij * lambda_bar_j over the selected j. Requires a prior
/// selection. Reported norms are nu sqrt(P_i(00)) times (1 + U(-r, r)), one
/// draw per row from keyed_rng(seed, "norm", i).
Embedding project_quantum(const SpectralModel& model, double norm_rel_err,
                          std::uint64_t seed);

/// Divides each nonzero row by its norm (zero rows are left as is).
Embedding normalize_rows(Embedding embedding);

/// n rows; k coordinate columns, then norm, then P00 in quantum mode, then
/// the label when `labels` is nonempty. Header line names the columns.
void write_embedding_csv(const std::filesystem::path& path, const Embedding& embedding,
                         std::span<const int> labels = {});

}  // namespace qsc
