#include "qsc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qsc/costmodel.hpp"
#include "qsc/errors.hpp"
#include "qsc/format.hpp"
#include "qsc/parallel.hpp"

namespace qsc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  } catch (const std::logic_error& e) {
    throw NumericalError(std::string(name) + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

/// Scales so the smallest nonzero row norm is 1 (zero rows stay zero).
Eigen::MatrixXd rescale_rows_min_norm(const Eigen::MatrixXd& rows) {
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    const double norm = rows.row(i).norm();
    if (norm > 0.0) smallest = std::min(smallest, norm);
  }
  if (!std::isfinite(smallest)) return rows;
  return rows / smallest;
}

/// eta over the nonzero rows; NaN if every row is zero.
double eta_nonzero_rows(const Eigen::MatrixXd& rows) {
  const Eigen::VectorXd norms = rows.rowwise().norm();
  std::vector<double> kept;
  for (Eigen::Index i = 0; i < norms.size(); ++i)
    if (norms[i] > 0.0) kept.push_back(norms[i]);
  if (kept.empty()) return kNaN;
  return eta_from_norms(Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<Eigen::Index>(kept.size())));
}

}  // namespace

RunResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  RunResult r;
  r.config = cfg;
  r.noise = cfg.resolved_noise();
  r.d_min = cfg.resolved_d_min();
  const bool quantum = r.noise.mode == Mode::quantum;

  r.data = stage("dataset", [&] {
    DataMatrix data = cfg.dataset.generator == "csv"
                          ? read_csv(cfg.dataset.csv_path, cfg.dataset.csv_has_labels)
                          : make_circles(cfg.dataset.circles);
    return cfg.dataset.rescale ? rescale_min_norm(data) : data;
  });
  if (cfg.k >= r.data.n())
    throw ConfigError("spectral: k must be smaller than the number of points");

  r.graph = stage("graph", [&] {
    return build_adjacency(r.data, r.d_min, r.noise, GraphBuildOptions{cfg.threads});
  });
  const IncidenceView view{&r.graph, r.noise.eps_B};
  const Eigen::MatrixXd laplacian = stage("laplacian", [&] { return normalized_laplacian(view); });

  r.model = stage("eigendecompose", [&] { return eigendecompose(laplacian); });
  if (quantum) {
    r.model = stage("spectral", [&] {
      SpectralModel m = estimate_singular_values(std::move(r.model), r.noise.eps_lambda,
                                                 r.noise.seed, cfg.eigen_noise);
      const Selection sel = select_k_lowest(m, cfg.k, cfg.gamma);
      m = apply_selection(std::move(m), sel, cfg.gamma);
      r.embedding = project_quantum(m, r.noise.norm_rel_err, r.noise.seed);
      return m;
    });
  } else {
    r.model = stage("spectral", [&] {
      const Selection sel = select_k_lowest(r.model, cfg.k, cfg.gamma);
      SpectralModel m = apply_selection(std::move(r.model), sel, cfg.gamma);
      r.embedding = project_classical(m, cfg.k);
      return m;
    });
  }

  Embedding clustering_input = cfg.row_normalize ? normalize_rows(r.embedding) : r.embedding;
  r.clustered = cfg.rescale_embedding ? rescale_rows_min_norm(clustering_input.rows)
                                      : clustering_input.rows;

  ClusteringConfig ccfg = cfg.clustering;
  ccfg.k = cfg.k;
  ccfg.delta = r.noise.delta;
  ccfg.threads = cfg.threads;
  r.clustering = stage("clustering", [&] {
    return quantum ? qmeans(r.clustered, ccfg) : kmeans(r.clustered, ccfg);
  });

  if (r.data.ground_truth) {
    r.accuracy = clustering_accuracy(r.clustering.labels, *r.data.ground_truth);
    r.misclassified = misclassified_count(r.clustering.labels, *r.data.ground_truth);
  }
  if (cfg.well_clusterable)
    r.well_clusterable = check_well_clusterable(r.clustered, r.clustering.centroids,
                                                *cfg.well_clusterable);

  r.cost = stage("costmodel", [&] {
    CostReport c;
    c.n = r.data.n();
    c.d = r.data.d();
    c.k = cfg.k;
    c.m = static_cast<std::int64_t>(r.graph.edge_count());
    c.eps_dist = r.noise.eps_dist;
    c.eps_B = r.noise.eps_B;
    c.eps_lambda = r.noise.eps_lambda;
    c.delta = r.noise.delta;
    c.iterations = r.clustering.iterations_used;
    c.mu_B = mu(view);
    c.eta_S = eta_from_norms(r.data.row_norms);
    if (quantum) {
      // Data parameters of the exact projection onto the k lowest eigenpairs.
      const Eigen::VectorXd values = r.model.eigenvalues.head(cfg.k);
      const Eigen::MatrixXd projected =
          r.model.eigenvectors.leftCols(cfg.k) * values.asDiagonal();
      const bool nonzero = values.cwiseAbs().maxCoeff() > 0.0;
      c.eta_Lk = eta_nonzero_rows(projected);
      c.kappa_Lk = nonzero ? kappa_from_values(values) : kNaN;
      c.mu_Lk = nonzero ? mu(projected) : kNaN;
    } else {
      c.eta_Lk = eta_nonzero_rows(r.embedding.rows);
      c.kappa_Lk = kappa(r.embedding.rows);
      c.mu_Lk = mu(r.embedding.rows);
    }
    c.t_s = qram_time(c.n, c.d, cfg.c_qram);
    c.classical_cost = classical_cost(static_cast<double>(c.n), static_cast<double>(c.d),
                                      static_cast<double>(c.m), static_cast<double>(c.k),
                                      static_cast<double>(c.iterations), cfg.classical_constants);
    c.quantum_cost = kNaN;
    c.quantum_cost_general = kNaN;
    const bool finite_params =
        std::isfinite(c.eta_Lk) && std::isfinite(c.kappa_Lk) && std::isfinite(c.mu_Lk);
    if (quantum && finite_params && c.eps_dist > 0 && c.eps_B > 0 && c.eps_lambda > 0 &&
        c.delta > 0) {
      QuantumCostInputs in;
      in.t_s = c.t_s;
      in.eta_S = c.eta_S;
      in.mu_B = c.mu_B;
      in.kappa_Lk = c.kappa_Lk;
      in.eta_Lk = c.eta_Lk;
      in.mu_Lk = c.mu_Lk;
      in.k = cfg.k;
      in.eps_dist = c.eps_dist;
      in.eps_B = c.eps_B;
      in.eps_lambda = c.eps_lambda;
      in.delta = c.delta;
      in.iterations = c.iterations;
      c.quantum_cost = quantum_cost(in);
      c.quantum_cost_general = quantum_cost_general(in);
    }
    return c;
  });
  return r;
}

RunConfig derive_run_config(const RunConfig& base, int n, int repetition) {
  RunConfig cfg = base;
  cfg.sweep.clear();
  cfg.repetitions = 1;
  cfg.dataset.circles.n = n;
  const auto un = static_cast<std::uint64_t>(n);
  const auto ur = static_cast<std::uint64_t>(repetition);
  cfg.dataset.circles.seed = keyed_rng(base.dataset.circles.seed, "run-data", {un, ur}).next_u64();
  cfg.noise.seed = keyed_rng(base.noise.seed, "run-noise", {un, ur}).next_u64();
  cfg.clustering.seed = keyed_rng(base.clustering.seed, "run-cluster", {un, ur}).next_u64();
  return cfg;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const CostReport& c) {
  return {
      {"n", c.n},
      {"d", c.d},
      {"k", c.k},
      {"m", c.m},
      {"mu_B", number_or_null(c.mu_B)},
      {"eta_S", number_or_null(c.eta_S)},
      {"eta_Lk", number_or_null(c.eta_Lk)},
      {"kappa_Lk", number_or_null(c.kappa_Lk)},
      {"mu_Lk", number_or_null(c.mu_Lk)},
      {"T_S", number_or_null(c.t_s)},
      {"eps_dist", c.eps_dist},
      {"eps_B", c.eps_B},
      {"eps_lambda", c.eps_lambda},
      {"delta", c.delta},
      {"iterations", c.iterations},
      {"classical_cost", number_or_null(c.classical_cost)},
      {"quantum_cost", number_or_null(c.quantum_cost)},
      {"quantum_cost_general", number_or_null(c.quantum_cost_general)},
  };
}

nlohmann::json run_record_json(const RunResult& r) {
  nlohmann::json j;
  j["config"] = write_config(r.config, false);
  j["noise"] = {{"mode", std::string(to_string(r.noise.mode))},
                {"eps_dist", r.noise.eps_dist},
                {"eps_B", r.noise.eps_B},
                {"eps_lambda", r.noise.eps_lambda},
                {"norm_rel_err", r.noise.norm_rel_err},
                {"delta", r.noise.delta},
                {"seed", r.noise.seed}};
  j["d_min"] = r.d_min;
  j["edges"] = r.graph.edge_count();
  j["selected_eigenvalues"] = r.model.selected;
  j["nu"] = r.model.nu;
  j["flagged_rows"] = r.embedding.flagged_rows;
  nlohmann::json centroids = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.clustering.centroids.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < r.clustering.centroids.cols(); ++c)
      row.push_back(r.clustering.centroids(i, c));
    centroids.push_back(row);
  }
  j["centroids"] = centroids;
  j["labels"] = r.clustering.labels;
  j["iterations"] = r.clustering.iterations_used;
  j["converged"] = r.clustering.converged;
  j["inertia"] = r.clustering.inertia;
  j["accuracy"] = r.accuracy ? nlohmann::json(*r.accuracy) : nlohmann::json(nullptr);
  j["misclassified"] = r.misclassified ? nlohmann::json(*r.misclassified) : nlohmann::json(nullptr);
  if (r.well_clusterable) {
    const auto& w = *r.well_clusterable;
    j["well_clusterable"] = {{"separation", w.separation},
                             {"proximity", w.proximity},
                             {"intra_vs_inter", w.intra_vs_inter},
                             {"min_separation", w.min_separation},
                             {"points_within_beta", w.points_within_beta},
                             {"inequality_lhs", w.inequality_lhs},
                             {"inequality_rhs", w.inequality_rhs}};
  }
  j["cost"] = to_json(r.cost);
  return j;
}

std::string cost_csv_header() {
  return "n,d,k,m,mu,eta_S,eta_Lk,kappa_Lk,classical_cost,quantum_cost,accuracy,seed";
}

std::string cost_csv_row(const CostReport& c, std::optional<double> accuracy, std::uint64_t seed) {
  std::ostringstream out;
  out << c.n << ',' << c.d << ',' << c.k << ',' << c.m << ',' << format_double(c.mu_B) << ','
      << format_double(c.eta_S) << ',' << format_double(c.eta_Lk) << ','
      << format_double(c.kappa_Lk) << ',' << format_double(c.classical_cost) << ','
      << format_double(c.quantum_cost) << ','
      << (accuracy ? format_double(*accuracy) : std::string("nan")) << ',' << seed;
  return out.str();
}

SweepRecord to_sweep_record(const RunResult& r, int repetition) {
  SweepRecord rec;
  rec.n = static_cast<int>(r.data.n());
  rec.repetition = repetition;
  rec.seed = r.noise.seed;
  rec.accuracy = r.accuracy;
  rec.misclassified = r.misclassified.value_or(0);
  rec.cost = r.cost;
  return rec;
}

SweepSummary summarize(const std::vector<SweepRecord>& records) {
  SweepSummary s;
  std::map<int, std::vector<const SweepRecord*>> by_n;
  for (const auto& rec : records) by_n[rec.n].push_back(&rec);

  std::vector<double> cn, cc, qn, qc;
  for (const auto& [n, recs] : by_n) {
    std::vector<double> acc, quantum;
    double classical_sum = 0.0;
    for (const SweepRecord* rec : recs) {
      if (rec->accuracy) acc.push_back(*rec->accuracy);
      classical_sum += rec->cost.classical_cost;
      cn.push_back(n);
      cc.push_back(rec->cost.classical_cost);
      if (std::isfinite(rec->cost.quantum_cost) && rec->cost.quantum_cost > 0.0) {
        quantum.push_back(rec->cost.quantum_cost);
        qn.push_back(n);
        qc.push_back(rec->cost.quantum_cost);
      }
    }
    if (!acc.empty()) {
      AccuracySummary a;
      a.n = n;
      a.runs = static_cast<int>(acc.size());
      double sum = 0.0;
      for (double v : acc) sum += v;
      a.mean = sum / static_cast<double>(acc.size());
      double var = 0.0;
      for (double v : acc) var += (v - a.mean) * (v - a.mean);
      a.sd = std::sqrt(var / static_cast<double>(acc.size()));
      a.min = *std::min_element(acc.begin(), acc.end());
      s.accuracy.push_back(a);
    }
    CostCurvePoint p;
    p.n = n;
    p.classical = classical_sum / static_cast<double>(recs.size());
    p.quantum_mean = kNaN;
    p.quantum_sd = kNaN;
    if (!quantum.empty()) {
      double sum = 0.0;
      for (double v : quantum) sum += v;
      p.quantum_mean = sum / static_cast<double>(quantum.size());
      double var = 0.0;
      for (double v : quantum) var += (v - p.quantum_mean) * (v - p.quantum_mean);
      p.quantum_sd = std::sqrt(var / static_cast<double>(quantum.size()));
      if (!s.first_quantum_advantage && p.quantum_mean < p.classical) s.first_quantum_advantage = n;
    }
    s.cost_curve.push_back(p);
  }
  s.fitted_crossover = kNaN;
  if (by_n.size() >= 2) s.classical_fit = fit_power_law(cn, cc);
  std::map<int, int> distinct_q;
  for (double n : qn) distinct_q[static_cast<int>(n)] = 1;
  if (distinct_q.size() >= 2) s.quantum_fit = fit_power_law(qn, qc);
  if (s.classical_fit && s.quantum_fit)
    s.fitted_crossover = power_law_crossover(*s.classical_fit, *s.quantum_fit);
  return s;
}

SweepResult run_sweep(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.sweep.empty()) throw ConfigError("run.sweep is empty");
  SweepResult out;
  out.config = cfg;
  struct Job {
    int n;
    int rep;
  };
  std::vector<Job> jobs;
  for (int n : cfg.sweep)
    for (int rep = 0; rep < cfg.repetitions; ++rep) jobs.push_back({n, rep});
  out.records.resize(jobs.size());

  // Runs are the parallel unit; each run itself is single-threaded.
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    RunConfig run_cfg = derive_run_config(cfg, jobs[i].n, jobs[i].rep);
    run_cfg.threads = 1;
    out.records[i] = to_sweep_record(run_pipeline(run_cfg), jobs[i].rep);
  });
  out.summary = summarize(out.records);
  return out;
}

nlohmann::json summary_json(const SweepSummary& s) {
  nlohmann::json j;
  nlohmann::json acc = nlohmann::json::array();
  for (const auto& a : s.accuracy)
    acc.push_back({{"n", a.n}, {"mean", a.mean}, {"sd", a.sd}, {"min", a.min}, {"runs", a.runs}});
  j["accuracy"] = acc;
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& p : s.cost_curve)
    curve.push_back({{"n", p.n},
                     {"classical", number_or_null(p.classical)},
                     {"quantum_mean", number_or_null(p.quantum_mean)},
                     {"quantum_sd", number_or_null(p.quantum_sd)}});
  j["cost_curve"] = curve;
  auto fit = [](const std::optional<PowerLawFit>& f) {
    if (!f) return nlohmann::json(nullptr);
    return nlohmann::json{{"slope", f->slope}, {"intercept", f->intercept}, {"r_squared", f->r_squared}};
  };
  j["classical_fit"] = fit(s.classical_fit);
  j["quantum_fit"] = fit(s.quantum_fit);
  j["fitted_crossover_n"] = number_or_null(s.fitted_crossover);
  j["first_quantum_advantage_n"] =
      s.first_quantum_advantage ? nlohmann::json(*s.first_quantum_advantage) : nlohmann::json(nullptr);
  return j;
}

namespace {

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> export_plotdata(const RunResult& r,
                                                   const std::filesystem::path& dir) {
  ensure_dir(dir);
  std::vector<std::filesystem::path> written;

  const auto record = dir / "record.json";
  write_text(record, run_record_json(r).dump(2) + "\n");
  written.push_back(record);

  const auto points = dir / "points.csv";
  {
    std::ostringstream out;
    for (Eigen::Index c = 0; c < r.data.d(); ++c) out << 's' << c << ',';
    out << "predicted" << (r.data.ground_truth ? ",truth" : "") << '\n';
    for (Eigen::Index i = 0; i < r.data.n(); ++i) {
      for (Eigen::Index c = 0; c < r.data.d(); ++c) out << format_double(r.data.points(i, c)) << ',';
      out << r.clustering.labels[static_cast<std::size_t>(i)];
      if (r.data.ground_truth) out << ',' << (*r.data.ground_truth)[static_cast<std::size_t>(i)];
      out << '\n';
    }
    write_text(points, out.str());
    written.push_back(points);
  }

  const auto embedding = dir / "embedding.csv";
  write_embedding_csv(embedding, r.embedding, r.clustering.labels);
  written.push_back(embedding);

  const auto edges = dir / "edges.txt";
  write_edge_list(edges, r.graph);
  written.push_back(edges);
  return written;
}

std::vector<std::filesystem::path> write_sweep_outputs(const SweepResult& sweep,
                                                       const std::filesystem::path& dir) {
  if (sweep.records.empty()) return {};
  ensure_dir(dir);
  std::vector<std::filesystem::path> written;

  std::ostringstream results;
  results << cost_csv_header() << '\n';
  for (const auto& rec : sweep.records)
    results << cost_csv_row(rec.cost, rec.accuracy, rec.seed) << '\n';
  written.push_back(dir / "results.csv");
  write_text(written.back(), results.str());

  nlohmann::json summary = summary_json(sweep.summary);
  summary["config"] = write_config(sweep.config, false);
  written.push_back(dir / "summary.json");
  write_text(written.back(), summary.dump(2) + "\n");

  std::ostringstream curve;
  curve << "n,classical,quantum_mean,quantum_sd\n";
  for (const auto& p : sweep.summary.cost_curve)
    curve << p.n << ',' << format_double(p.classical) << ',' << format_double(p.quantum_mean)
          << ',' << format_double(p.quantum_sd) << '\n';
  written.push_back(dir / "cost_curve.csv");
  write_text(written.back(), curve.str());
  return written;
}

std::vector<SweepRecord> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != cost_csv_header())
    throw std::runtime_error(path.string() + ": unexpected header");
  std::vector<SweepRecord> out;
  std::map<int, int> reps;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 12)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 12 fields");
    try {
      SweepRecord rec;
      rec.cost.n = std::stoll(f[0]);
      rec.cost.d = std::stoll(f[1]);
      rec.cost.k = std::stoll(f[2]);
      rec.cost.m = std::stoll(f[3]);
      rec.cost.mu_B = std::stod(f[4]);
      rec.cost.eta_S = std::stod(f[5]);
      rec.cost.eta_Lk = std::stod(f[6]);
      rec.cost.kappa_Lk = std::stod(f[7]);
      rec.cost.classical_cost = std::stod(f[8]);
      rec.cost.quantum_cost = std::stod(f[9]);
      const double acc = std::stod(f[10]);
      if (std::isfinite(acc)) rec.accuracy = acc;
      rec.seed = std::stoull(f[11]);
      rec.n = static_cast<int>(rec.cost.n);
      rec.repetition = reps[rec.n]++;
      out.push_back(rec);
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
  }
  return out;
}

}  // namespace qsc
