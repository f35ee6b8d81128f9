#include "qsc/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qsc/errors.hpp"
#include "qsc/format.hpp"

namespace qsc {

NoiseProfile RunConfig::resolved_noise() const {
  return NoiseProfile::make(noise.mode, noise.eps_dist, noise.eps_B, noise.eps_lambda,
                            noise.norm_rel_err, noise.delta, noise.seed);
}

double RunConfig::resolved_d_min() const {
  if (d_min) return *d_min;
  if (dataset.generator == "circles")
    return 0.6 * (dataset.circles.radius_outer - dataset.circles.radius_inner);
  throw ConfigError("graph.d_min is required for csv datasets");
}

void RunConfig::validate() const {
  if (dataset.generator != "circles" && dataset.generator != "csv")
    throw ConfigError("dataset.generator must be circles or csv");
  if (dataset.generator == "csv" && !std::filesystem::exists(dataset.csv_path))
    throw ConfigError("dataset.csv: file not found: " + dataset.csv_path.string());
  if (dataset.generator == "circles") {
    const auto& c = dataset.circles;
    if (c.n < 4 || c.n % 2) throw ConfigError("dataset.n must be even and >= 4");
    if (!(c.radius_inner > 0.0 && c.radius_inner < c.radius_outer))
      throw ConfigError("need 0 < dataset.radius_inner < dataset.radius_outer");
    if (!(c.noise_sd >= 0.0)) throw ConfigError("dataset.noise_sd must be >= 0");
  }
  if (!(resolved_d_min() > 0.0)) throw ConfigError("graph.d_min must be > 0");
  if (k < 1) throw ConfigError("spectral.k must be >= 1");
  if (!(gamma > 1.0)) throw ConfigError("spectral.gamma must be > 1");
  if (repetitions < 1) throw ConfigError("run.repetitions must be >= 1");
  if (!std::is_sorted(sweep.begin(), sweep.end()) ||
      std::adjacent_find(sweep.begin(), sweep.end()) != sweep.end())
    throw ConfigError("run.sweep must be strictly ascending");
  for (int n : sweep)
    if (n < 4 || n % 2) throw ConfigError("run.sweep sizes must be even and >= 4");
  try {
    resolved_noise();
    ClusteringConfig probe = clustering;
    probe.k = k;
    probe.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number, got '" + v + "'");
  }
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true|false, got '" + v + "'");
}

WellClusterableParams& wc(RunConfig& cfg) {
  if (!cfg.well_clusterable) cfg.well_clusterable = WellClusterableParams{};
  return *cfg.well_clusterable;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const std::string& v = value;
  auto& c = cfg.dataset.circles;
  if (key == "dataset.generator") cfg.dataset.generator = v;
  else if (key == "dataset.n") c.n = to_int<int>(key, v);
  else if (key == "dataset.radius_inner") c.radius_inner = to_double(key, v);
  else if (key == "dataset.radius_outer") c.radius_outer = to_double(key, v);
  else if (key == "dataset.noise_sd") c.noise_sd = to_double(key, v);
  else if (key == "dataset.seed") c.seed = to_int<std::uint64_t>(key, v);
  else if (key == "dataset.csv") cfg.dataset.csv_path = v;
  else if (key == "dataset.csv_labels") cfg.dataset.csv_has_labels = to_bool(key, v);
  else if (key == "dataset.rescale") cfg.dataset.rescale = to_bool(key, v);
  else if (key == "graph.d_min") {
    if (v == "auto") cfg.d_min.reset();
    else cfg.d_min = to_double(key, v);
  }
  else if (key == "spectral.k") cfg.k = to_int<int>(key, v);
  else if (key == "spectral.gamma") cfg.gamma = to_double(key, v);
  else if (key == "spectral.eps_lambda_mode") {
    if (v == "absolute") cfg.eigen_noise = EigenNoiseMode::absolute;
    else if (v == "relative") cfg.eigen_noise = EigenNoiseMode::relative;
    else throw ConfigError(key + ": expected absolute|relative");
  }
  else if (key == "spectral.row_normalize") cfg.row_normalize = to_bool(key, v);
  else if (key == "clustering.rescale_embedding") cfg.rescale_embedding = to_bool(key, v);
  else if (key == "noise.mode") {
    try {
      cfg.noise.mode = mode_from_string(v);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  else if (key == "noise.eps_dist") cfg.noise.eps_dist = to_double(key, v);
  else if (key == "noise.eps_B") cfg.noise.eps_B = to_double(key, v);
  else if (key == "noise.eps_lambda") cfg.noise.eps_lambda = to_double(key, v);
  else if (key == "noise.norm_rel_err") cfg.noise.norm_rel_err = to_double(key, v);
  else if (key == "noise.delta") cfg.noise.delta = to_double(key, v);
  else if (key == "noise.seed") cfg.noise.seed = to_int<std::uint64_t>(key, v);
  else if (key == "clustering.max_iters") cfg.clustering.max_iters = to_int<int>(key, v);
  else if (key == "clustering.tol") cfg.clustering.tol = to_double(key, v);
  else if (key == "clustering.seed") cfg.clustering.seed = to_int<std::uint64_t>(key, v);
  else if (key == "run.repetitions") cfg.repetitions = to_int<int>(key, v);
  else if (key == "run.sweep") {
    cfg.sweep.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) cfg.sweep.push_back(to_int<int>(key, item));
    }
  }
  else if (key == "run.output_dir") cfg.output_dir = v;
  else if (key == "run.threads") cfg.threads = to_int<unsigned>(key, v);
  else if (key == "cost.c_qram") cfg.c_qram = to_double(key, v);
  else if (key == "cost.c_distances") cfg.classical_constants.distances = to_double(key, v);
  else if (key == "cost.c_laplacian") cfg.classical_constants.laplacian = to_double(key, v);
  else if (key == "cost.c_eigensolve") cfg.classical_constants.eigensolve = to_double(key, v);
  else if (key == "cost.c_kmeans") cfg.classical_constants.kmeans = to_double(key, v);
  else if (key == "wellclusterable.xi") wc(cfg).xi = to_double(key, v);
  else if (key == "wellclusterable.beta") wc(cfg).beta = to_double(key, v);
  else if (key == "wellclusterable.lambda") wc(cfg).lambda_frac = to_double(key, v);
  else if (key == "wellclusterable.eta") wc(cfg).eta_bound = to_double(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string write_config(const RunConfig& cfg, bool include_execution) {
  std::ostringstream out;
  const auto& c = cfg.dataset.circles;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  out << "dataset.generator = " << cfg.dataset.generator << '\n'
      << "dataset.n = " << c.n << '\n'
      << "dataset.radius_inner = " << format_double(c.radius_inner) << '\n'
      << "dataset.radius_outer = " << format_double(c.radius_outer) << '\n'
      << "dataset.noise_sd = " << format_double(c.noise_sd) << '\n'
      << "dataset.seed = " << c.seed << '\n';
  if (!cfg.dataset.csv_path.empty()) out << "dataset.csv = " << cfg.dataset.csv_path.string() << '\n';
  out << "dataset.csv_labels = " << b(cfg.dataset.csv_has_labels) << '\n'
      << "dataset.rescale = " << b(cfg.dataset.rescale) << '\n'
      << "graph.d_min = " << (cfg.d_min ? format_double(*cfg.d_min) : std::string("auto")) << '\n'
      << "spectral.k = " << cfg.k << '\n'
      << "spectral.gamma = " << format_double(cfg.gamma) << '\n'
      << "spectral.eps_lambda_mode = "
      << (cfg.eigen_noise == EigenNoiseMode::absolute ? "absolute" : "relative") << '\n'
      << "spectral.row_normalize = " << b(cfg.row_normalize) << '\n'
      << "noise.mode = " << to_string(cfg.noise.mode) << '\n'
      << "noise.eps_dist = " << format_double(cfg.noise.eps_dist) << '\n'
      << "noise.eps_B = " << format_double(cfg.noise.eps_B) << '\n'
      << "noise.eps_lambda = " << format_double(cfg.noise.eps_lambda) << '\n'
      << "noise.norm_rel_err = " << format_double(cfg.noise.norm_rel_err) << '\n'
      << "noise.delta = " << format_double(cfg.noise.delta) << '\n'
      << "noise.seed = " << cfg.noise.seed << '\n'
      << "clustering.max_iters = " << cfg.clustering.max_iters << '\n'
      << "clustering.tol = " << format_double(cfg.clustering.tol) << '\n'
      << "clustering.seed = " << cfg.clustering.seed << '\n'
      << "clustering.rescale_embedding = " << b(cfg.rescale_embedding) << '\n'
      << "run.repetitions = " << cfg.repetitions << '\n'
      << "run.sweep = ";
  for (std::size_t i = 0; i < cfg.sweep.size(); ++i) out << (i ? "," : "") << cfg.sweep[i];
  out << '\n';
  if (include_execution) {
    if (!cfg.output_dir.empty()) out << "run.output_dir = " << cfg.output_dir.string() << '\n';
    out << "run.threads = " << cfg.threads << '\n';
  }
  out << "cost.c_qram = " << format_double(cfg.c_qram) << '\n'
      << "cost.c_distances = " << format_double(cfg.classical_constants.distances) << '\n'
      << "cost.c_laplacian = " << format_double(cfg.classical_constants.laplacian) << '\n'
      << "cost.c_eigensolve = " << format_double(cfg.classical_constants.eigensolve) << '\n'
      << "cost.c_kmeans = " << format_double(cfg.classical_constants.kmeans) << '\n';
  if (cfg.well_clusterable) {
    const auto& w = *cfg.well_clusterable;
    out << "wellclusterable.xi = " << format_double(w.xi) << '\n'
        << "wellclusterable.beta = " << format_double(w.beta) << '\n'
        << "wellclusterable.lambda = " << format_double(w.lambda_frac) << '\n'
        << "wellclusterable.eta = " << format_double(w.eta_bound) << '\n';
  }
  return out.str();
}

}  // namespace qsc
