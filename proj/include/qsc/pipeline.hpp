#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsc/clustering.hpp"
#include "qsc/config.hpp"
#include "qsc/datasets.hpp"
#include "qsc/graph.hpp"
#include "qsc/spectral.hpp"

namespace qsc {

/// Data parameters and evaluated running-time expressions for one run.
struct CostReport {
  std::int64_t n = 0, d = 0, k = 0, m = 0;
  double mu_B = 0, eta_S = 0, eta_Lk = 0, kappa_Lk = 0, mu_Lk = 0;
  double t_s = 0;
  double eps_dist = 0, eps_B = 0, eps_lambda = 0, delta = 0;
  int iterations = 0;
  double classical_cost = 0;
  double quantum_cost = 0;          // well-clusterable branch; NaN in classical mode
  double quantum_cost_general = 0;  // general q-means branch; NaN in classical mode
};

/// Everything produced by one pass of the pipeline.
struct RunResult {
  RunConfig config;  // fully resolved
  NoiseProfile noise;
  double d_min = 0;
  DataMatrix data;
  SimilarityGraph graph;
  SpectralModel model;
  Embedding embedding;         // spectral coordinates (before clustering-side scaling)
  Eigen::MatrixXd clustered;   // rows handed to k-means / q-means
  ClusteringResult clustering;
  std::optional<double> accuracy;
  std::optional<std::size_t> misclassified;
  std::optional<WellClusterableReport> well_clusterable;
  CostReport cost;
};

/// data -> adjacency -> normalized Laplacian -> eigendecomposition ->
/// (noisy eigenvalues, selection, lambda-scaled projection | eigenvector
/// projection) -> (q-means | k-means) -> accuracy and cost report.
/// Stage failures are rethrown with the stage name prefixed; ConfigError and
/// NumericalError keep their type.
RunResult run_pipeline(const RunConfig& cfg);

/// Per-run seeds for sweep point (n, repetition), derived from the base seeds.
RunConfig derive_run_config(const RunConfig& base, int n, int repetition);

nlohmann::json to_json(const CostReport& report);
nlohmann::json run_record_json(const RunResult& result);

/// CSV header/row in the results-table column order.
std::string cost_csv_header();
std::string cost_csv_row(const CostReport& report, std::optional<double> accuracy,
                         std::uint64_t seed);

struct SweepRecord {
  int n = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::optional<double> accuracy;
  std::size_t misclassified = 0;
  CostReport cost;
};

struct AccuracySummary {
  int n = 0;
  double mean = 0;
  double sd = 0;  // population standard deviation
  double min = 0;
  int runs = 0;
};

struct CostCurvePoint {
  int n = 0;
  double classical = 0;
  double quantum_mean = 0;
  double quantum_sd = 0;
};

struct SweepSummary {
  std::vector<AccuracySummary> accuracy;
  std::vector<CostCurvePoint> cost_curve;
  std::optional<PowerLawFit> classical_fit;
  std::optional<PowerLawFit> quantum_fit;
  /// Where the fitted power laws cross (NaN if undefined).
  double fitted_crossover = 0;
  /// Smallest sweep n whose mean quantum cost is below the classical cost.
  std::optional<int> first_quantum_advantage;
};

struct SweepResult {
  RunConfig config;
  std::vector<SweepRecord> records;  // ordered by (n, repetition)
  SweepSummary summary;
};

SweepRecord to_sweep_record(const RunResult& result, int repetition);
SweepSummary summarize(const std::vector<SweepRecord>& records);

/// Runs every (n, repetition) in the sweep; runs execute concurrently on
/// cfg.threads workers and the output does not depend on the thread count.
SweepResult run_sweep(const RunConfig& cfg);

nlohmann::json summary_json(const SweepSummary& summary);

/// Reads a results table written by write_sweep_outputs.
std::vector<SweepRecord> read_results_csv(const std::filesystem::path& path);

/// Single run: record.json, points.csv, embedding.csv, edges.txt.
std::vector<std::filesystem::path> export_plotdata(const RunResult& result,
                                                   const std::filesystem::path& dir);
/// Sweep: results.csv, summary.json, cost_curve.csv. Writes nothing (and
/// returns an empty list) when there are no records.
std::vector<std::filesystem::path> write_sweep_outputs(const SweepResult& sweep,
                                                       const std::filesystem::path& dir);

}  // namespace qsc
