#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsc/config.hpp"
#include "qsc/errors.hpp"
#include "qsc/pipeline.hpp"

namespace {

struct Common {
  std::string config_path;
  std::string out;
  std::string mode;
  std::vector<std::string> settings;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-c,--config", c.config_path, "config file (key = value lines)");
  cmd->add_option("-o,--out", c.out, "output directory (overrides config and QSC_OUTPUT_DIR)");
  cmd->add_option("--mode", c.mode, "classical or quantum (overrides noise.mode)")
      ->check(CLI::IsMember({"classical", "quantum"}));
  cmd->add_option("-s,--set", c.settings, "extra key=value setting, may repeat");
  cmd->add_option("-j,--threads", c.threads, "worker threads");
}

qsc::RunConfig resolve(const Common& c) {
  qsc::RunConfig cfg = c.config_path.empty() ? qsc::RunConfig{} : qsc::load_config(c.config_path);
  for (const auto& s : c.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw qsc::ConfigError("--set expects key=value, got '" + s + "'");
    qsc::apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!c.mode.empty()) qsc::apply_setting(cfg, "noise.mode", c.mode);
  if (c.threads > 0) cfg.threads = c.threads;
  if (!c.out.empty()) {
    cfg.output_dir = c.out;
  } else if (cfg.output_dir.empty()) {
    const char* env = std::getenv("QSC_OUTPUT_DIR");
    cfg.output_dir = env && *env ? env : "results";
  }
  cfg.validate();
  return cfg;
}

void list_written(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
}

void print_table(const qsc::SweepSummary& s) {
  std::printf("%6s  %9s  %8s  %9s  %4s\n", "n", "accuracy", "sd", "min", "runs");
  for (const auto& a : s.accuracy)
    std::printf("%6d  %8.2f%%  %7.2f%%  %8.2f%%  %4d\n", a.n, 100 * a.mean, 100 * a.sd,
                100 * a.min, a.runs);
  if (s.classical_fit) std::printf("classical cost slope %.3f\n", s.classical_fit->slope);
  if (s.quantum_fit) std::printf("quantum cost slope   %.3f\n", s.quantum_fit->slope);
  if (std::isfinite(s.fitted_crossover))
    std::printf("fitted crossover at n = %.1f\n", s.fitted_crossover);
  if (s.first_quantum_advantage)
    std::printf("first n with quantum < classical: %d\n", *s.first_quantum_advantage);
}

int cmd_generate(const Common& c) {
  const qsc::RunConfig cfg = resolve(c);
  if (cfg.dataset.generator != "circles")
    throw qsc::ConfigError("generate only supports dataset.generator = circles");
  qsc::DataMatrix data = qsc::make_circles(cfg.dataset.circles);
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = cfg.output_dir / "dataset.csv";
  qsc::write_csv(path, data);
  list_written({path});
  return 0;
}

int cmd_cluster(const Common& c) {
  const qsc::RunConfig cfg = resolve(c);
  const qsc::RunResult r = qsc::run_pipeline(cfg);
  std::cout << "mode " << qsc::to_string(r.noise.mode) << ", n " << r.data.n() << ", edges "
            << r.graph.edge_count() << ", iterations " << r.clustering.iterations_used << '\n';
  if (r.accuracy)
    std::printf("accuracy %.2f%% (%zu misclassified)\n", 100 * *r.accuracy, *r.misclassified);
  list_written(qsc::export_plotdata(r, cfg.output_dir));
  return 0;
}

int cmd_sweep(const Common& c) {
  const qsc::RunConfig cfg = resolve(c);
  const qsc::SweepResult sweep = qsc::run_sweep(cfg);
  print_table(sweep.summary);
  list_written(qsc::write_sweep_outputs(sweep, cfg.output_dir));
  return 0;
}

int cmd_report(const std::string& results, const std::string& out) {
  const auto records = qsc::read_results_csv(results);
  if (records.empty()) {
    std::cerr << "warning: " << results << " has no records, nothing written\n";
    return 0;
  }
  const qsc::SweepSummary s = qsc::summarize(records);
  print_table(s);
  if (!out.empty()) {
    std::filesystem::create_directories(out);
    const auto path = std::filesystem::path(out) / "report.json";
    std::ofstream(path) << qsc::summary_json(s).dump(2) << '\n';
    list_written({path});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral clustering with a simulated quantum pipeline"};
  app.require_subcommand(1);

  Common gen, clu, swp;
  add_common(app.add_subcommand("generate", "write a two-circles dataset"), gen);
  add_common(app.add_subcommand("cluster", "run the pipeline once and export plot data"), clu);
  add_common(app.add_subcommand("sweep", "run every n in run.sweep, run.repetitions times"), swp);
  auto* report = app.add_subcommand("report", "summarize an existing results.csv");
  std::string results, report_out;
  report->add_option("results", results, "results.csv from a sweep")->required();
  report->add_option("-o,--out", report_out, "directory for report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("generate")) return cmd_generate(gen);
    if (app.got_subcommand("cluster")) return cmd_cluster(clu);
    if (app.got_subcommand("sweep")) return cmd_sweep(swp);
    return cmd_report(results, report_out);
  } catch (const qsc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qsc::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
