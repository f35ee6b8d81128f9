#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "qsc/pipeline.hpp"

using namespace qsc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qsc_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig quantum_config(int n) {
  RunConfig cfg;
  cfg.dataset.circles.n = n;
  cfg.dataset.circles.seed = 3;
  cfg.noise = NoiseProfile::quantum_defaults(4);
  cfg.clustering.seed = 5;
  return cfg;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QSC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("classical two circles are separated exactly") {
  RunConfig cfg;
  cfg.dataset.circles.n = 600;
  cfg.dataset.circles.seed = 8;
  const RunResult r = run_pipeline(cfg);
  REQUIRE(r.accuracy);
  CHECK(*r.accuracy == 1.0);
  CHECK(*r.misclassified == 0);
  CHECK(r.cost.n == 600);
  CHECK(r.cost.m == static_cast<std::int64_t>(r.graph.edge_count()));
  CHECK(std::isnan(r.cost.quantum_cost));
  CHECK(r.cost.mu_B <= 600);
  CHECK(r.cost.eta_S >= 1.0);
  CHECK(r.cost.kappa_Lk == doctest::Approx(1.0));
}

TEST_CASE("quantum run reports finite costs and honours the noise contracts") {
  const RunResult r = run_pipeline(quantum_config(200));
  CHECK(r.noise.mode == Mode::quantum);
  CHECK(std::isfinite(r.cost.quantum_cost));
  CHECK(r.cost.quantum_cost > 0);
  CHECK(r.cost.kappa_Lk >= 1.0);
  CHECK(r.cost.eta_Lk >= 1.0);
  CHECK(r.cost.mu_B <= 200);
  for (double shift : r.clustering.centroid_perturbation) CHECK(shift <= 0.9);
  REQUIRE(r.model.noisy_eigenvalues);
  for (Eigen::Index j = 0; j < r.model.n(); ++j)
    REQUIRE(std::abs(std::sqrt((*r.model.noisy_eigenvalues)[j]) -
                     std::sqrt(std::max(0.0, r.model.eigenvalues[j]))) <= 0.9 + 1e-12);
}

TEST_CASE("zero-noise quantum embedding is the classical one scaled by eigenvalues") {
  RunConfig cfg = quantum_config(200);
  cfg.noise = NoiseProfile::make(Mode::quantum, 0, 0.1, 0, 0, 0, 4);
  const RunResult q = run_pipeline(cfg);
  const Embedding c = project_classical(q.model, cfg.k);
  for (int j = 0; j < cfg.k; ++j)
    CHECK((q.embedding.rows.col(j) - c.rows.col(j) * q.model.eigenvalues[j]).cwiseAbs().maxCoeff() <
          1e-15);
}

TEST_CASE("same seed gives byte-identical files for any thread count") {
  RunConfig cfg = quantum_config(300);
  cfg.threads = 1;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  export_plotdata(run_pipeline(cfg), a);
  cfg.threads = 4;
  export_plotdata(run_pipeline(cfg), b);
  for (const char* f : {"record.json", "points.csv", "embedding.csv", "edges.txt"})
    CHECK(slurp(a / f) == slurp(b / f));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("sweeps are deterministic and aggregate correctly") {
  RunConfig cfg = quantum_config(100);
  cfg.sweep = {100, 140, 180};
  cfg.repetitions = 3;
  cfg.threads = 1;
  const SweepResult one = run_sweep(cfg);
  cfg.threads = 3;
  const SweepResult three = run_sweep(cfg);
  const fs::path a = scratch("sweep_a"), b = scratch("sweep_b");
  const auto files = write_sweep_outputs(one, a);
  write_sweep_outputs(three, b);
  REQUIRE(files.size() == 3);
  for (const char* f : {"results.csv", "summary.json", "cost_curve.csv"})
    CHECK(slurp(a / f) == slurp(b / f));

  REQUIRE(one.records.size() == 9);
  // per-n mean accuracy recomputed from the raw records
  std::map<int, std::vector<double>> acc;
  for (const auto& r : one.records) acc[r.n].push_back(*r.accuracy);
  REQUIRE(one.summary.accuracy.size() == 3);
  for (const auto& s : one.summary.accuracy) {
    double mean = 0;
    for (double v : acc[s.n]) mean += v;
    mean /= 3;
    double var = 0;
    for (double v : acc[s.n]) var += (v - mean) * (v - mean);
    CHECK(s.mean == doctest::Approx(mean));
    CHECK(s.sd == doctest::Approx(std::sqrt(var / 3)));
    CHECK(s.runs == 3);
  }
  std::ifstream curve(a / "cost_curve.csv");
  std::string header;
  std::getline(curve, header);
  CHECK(header == "n,classical,quantum_mean,quantum_sd");

  const auto back = read_results_csv(a / "results.csv");
  REQUIRE(back.size() == one.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].n == one.records[i].n);
    CHECK(back[i].cost.quantum_cost == one.records[i].cost.quantum_cost);
    CHECK(back[i].seed == one.records[i].seed);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("different repetitions get different seeds") {
  const RunConfig base = quantum_config(100);
  const RunConfig r0 = derive_run_config(base, 100, 0);
  const RunConfig r1 = derive_run_config(base, 100, 1);
  const RunConfig n1 = derive_run_config(base, 200, 0);
  CHECK(r0.noise.seed != r1.noise.seed);
  CHECK(r0.dataset.circles.seed != n1.dataset.circles.seed);
  CHECK(r0.dataset.circles.n == 100);
  CHECK(n1.dataset.circles.n == 200);
}

TEST_CASE("empty sweep writes nothing") {
  SweepResult empty;
  const fs::path dir = scratch("empty");
  CHECK(write_sweep_outputs(empty, dir).empty());
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("records embed the resolved config") {
  const RunResult r = run_pipeline(quantum_config(100));
  const auto j = run_record_json(r);
  CHECK(j.at("config").get<std::string>() == write_config(r.config, false));
  CHECK(j.at("noise").at("mode") == "quantum");
  CHECK(j.at("labels").size() == 100);
  CHECK(cost_csv_row(r.cost, r.accuracy, 9).find(",9") != std::string::npos);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("cli");
  CHECK(run_cli("cluster --set dataset.n=300 -o " + out.string()) == 0);
  CHECK(fs::exists(out / "record.json"));
  CHECK(run_cli("cluster --set spectral.k=0 -o " + out.string()) == 2);
  CHECK(run_cli("cluster --set bogus.key=1") == 2);
  CHECK(run_cli("cluster --config /no/such.cfg") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("generate --set dataset.n=10 -o " + out.string()) == 0);
  CHECK(fs::exists(out / "dataset.csv"));
  CHECK(run_cli("cluster -c " + std::string(QSC_CONFIG_DIR) +
                "/circles_quantum.cfg --mode classical --set dataset.n=100 -o " + out.string()) == 0);
  CHECK(slurp(out / "record.json").find("\"mode\": \"classical\"") != std::string::npos);
  fs::remove_all(out);
}
