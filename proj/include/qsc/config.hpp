#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsc/clustering.hpp"
#include "qsc/costmodel.hpp"
#include "qsc/datasets.hpp"
#include "qsc/noise.hpp"
#include "qsc/spectral.hpp"

namespace qsc {

struct DatasetSpec {
  std::string generator = "circles";  // "circles" or "csv"
  CirclesParams circles;
  std::filesystem::path csv_path;
  bool csv_has_labels = true;
  bool rescale = true;  // divide by the smallest row norm before building the graph
};

/// Everything a run needs. Parsed from the key=value config format; see
/// docs in README.md for the grammar.
struct RunConfig {
  DatasetSpec dataset;
  std::optional<double> d_min;  // default 0.6 (r_outer - r_inner) for circles

  int k = 2;
  double gamma = 1.1;
  EigenNoiseMode eigen_noise = EigenNoiseMode::absolute;
  bool row_normalize = false;     // Ng-style unit rows before clustering
  bool rescale_embedding = true;  // min row norm 1 before clustering

  /// Raw precision settings (reference quantum values by default);
  /// resolved_noise() zeroes them in classical mode.
  NoiseProfile noise = [] {
    NoiseProfile p = NoiseProfile::quantum_defaults(0);
    p.mode = Mode::classical;
    return p;
  }();
  ClusteringConfig clustering;

  int repetitions = 1;
  std::vector<int> sweep;
  std::filesystem::path output_dir;
  unsigned threads = 1;

  double c_qram = 1.0;
  ClassicalCostConstants classical_constants;
  std::optional<WellClusterableParams> well_clusterable;

  NoiseProfile resolved_noise() const;
  double resolved_d_min() const;
  /// Throws ConfigError on any violated constraint.
  void validate() const;
};

/// Parses `section.key = value` lines; '#' starts a comment. Unknown keys and
/// malformed values raise ConfigError naming the line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(write_config(c)) reproduces c. Without
/// the execution settings (run.output_dir, run.threads) the text depends only
/// on what determines the results.
std::string write_config(const RunConfig& cfg, bool include_execution = true);

/// Applies one `key=value` override (same grammar as the file).
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

}  // namespace qsc
