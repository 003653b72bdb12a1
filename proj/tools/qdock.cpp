// qdock: docking as weighted subgraph isomorphism on a QUBO.
//
// Subcommands: graph, grid, build, export, solve, dock, tune, report.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdock/parallel.hpp"
#include "qdock/qdock.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string complex;
  std::string dataset;
  std::string qubo;
  std::string samples;
  std::vector<double> lambdas = {0, 0, 0, 0, 0};
  std::optional<double> gamma;
  std::vector<double> weights = qdock::kDefaultTunerWeights;
  std::size_t reads = 100;
  std::size_t sweeps = 2000;
  std::uint64_t seed = 0;
  std::optional<double> t_initial;
  std::optional<double> t_final;
  bool exact = false;
  std::size_t keep = 100;
  std::string out;
  std::string csv;
  std::string layout;
  unsigned threads = qdock::default_thread_count();
  int verbosity = 0;
};

qdock::Hyperparameters hyperparameters(const RunConfig& cfg) {
  if (cfg.lambdas.size() != qdock::kPhysChemCount) throw UsageError("--lambdas expects 5 comma-separated values");
  qdock::Hyperparameters hp;
  std::copy(cfg.lambdas.begin(), cfg.lambdas.end(), hp.lambdas.begin());
  hp.gamma = cfg.gamma;
  hp.validate();
  return hp;
}

qdock::AnnealSchedule schedule(const RunConfig& cfg) {
  qdock::AnnealSchedule s;
  s.n_reads = cfg.reads;
  s.n_sweeps = cfg.sweeps;
  s.seed = cfg.seed;
  s.t_initial = cfg.t_initial;
  s.t_final = cfg.t_final;
  s.validate();
  return s;
}

std::unique_ptr<qdock::Sampler> make_sampler(const RunConfig& cfg, unsigned threads) {
  if (cfg.exact) return std::make_unique<qdock::ExactSampler>(cfg.reads);
  return std::make_unique<qdock::AnnealingSampler>(schedule(cfg), threads);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw qdock::Error("cannot write '" + path + "'");
}

std::string dump(const qdock::ordered_json& j) { return j.dump(2) + "\n"; }

std::vector<fs::path> dataset_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw qdock::Error("dataset directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw qdock::Error("dataset directory '" + dir + "' holds no .json complexes");
  return files;
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

int run_graph(const RunConfig& cfg) {
  require(cfg.complex, "--complex");
  emit(cfg.out, dump(qdock::to_json(qdock::build_ligand_graph(qdock::load_complex(cfg.complex)))));
  return 0;
}

int run_grid(const RunConfig& cfg) {
  require(cfg.complex, "--complex");
  emit(cfg.out, dump(qdock::to_json(qdock::build_grid_graph(qdock::load_complex(cfg.complex), cfg.threads))));
  return 0;
}

int run_build(const RunConfig& cfg) {
  require(cfg.complex, "--complex");
  require(cfg.out, "--out");
  const auto hp = hyperparameters(cfg);
  const auto problem = qdock::build_full(qdock::load_complex(cfg.complex), hp, cfg.threads);
  qdock::export_qubo(problem, cfg.out);
  if (cfg.verbosity > 0)
    std::clog << "wrote " << problem.n_vars() << " variables, " << problem.coeffs().size() << " entries to " << cfg.out
              << "\n";
  return 0;
}

int run_export(const RunConfig& cfg) {
  require(cfg.complex, "--complex");
  require(cfg.out, "--out");
  const auto input = qdock::load_complex(cfg.complex);
  const auto problem = qdock::build_full(input, hyperparameters(cfg), cfg.threads);
  qdock::export_qubo(problem, cfg.out);

  // Variable map for whoever samples the exported file.
  const auto& L = *problem.layout();
  qdock::ordered_json vars = qdock::ordered_json::array();
  for (std::size_t v = 0; v < L.n_vars(); ++v)
    vars.push_back({{"var", v},
                    {"atom", input.ligand_atoms[L.atom(v)].id},
                    {"grid_point", input.grid_points[L.point(v)].id}});
  const auto& info = *problem.build_info();
  qdock::ordered_json doc = {{"qubo", cfg.out},
                             {"n_vars", L.n_vars()},
                             {"n_atoms", L.n_atoms},
                             {"n_points", L.n_points},
                             {"offset", problem.offset()},
                             {"gamma", info.gamma},
                             {"lambda_vector", info.lambdas},
                             {"scales", info.scales},
                             {"variables", vars}};
  emit(cfg.layout.empty() ? cfg.out + ".layout.json" : cfg.layout, dump(doc));
  return 0;
}

int run_solve(const RunConfig& cfg) {
  require(cfg.qubo, "--qubo");
  const auto problem = qdock::import_qubo(cfg.qubo);
  const auto set = cfg.exact ? qdock::brute_force(problem, cfg.keep) : qdock::simulated_anneal(problem, schedule(cfg), cfg.threads);
  if (cfg.verbosity > 0) std::clog << set.sampler << ": " << set.wall_seconds << " s\n";
  emit(cfg.out, dump(qdock::to_json(set)));
  return 0;
}

int write_reports(const RunConfig& cfg, const std::vector<qdock::DockingReport>& reports, bool single) {
  if (single) {
    emit(cfg.out, dump(qdock::to_json(reports.front())));
  } else {
    qdock::ordered_json arr = qdock::ordered_json::array();
    for (const auto& r : reports) arr.push_back(qdock::to_json(r));
    emit(cfg.out, dump(arr));
  }
  if (!cfg.csv.empty()) {
    std::ostringstream csv;
    qdock::write_metrics_csv(csv, reports);
    emit(cfg.csv, csv.str());
  }
  const bool any_invalid = std::any_of(reports.begin(), reports.end(), [](const auto& r) { return !r.valid; });
  if (any_invalid) {
    for (const auto& r : reports)
      if (!r.valid) std::cerr << "qdock: " << r.name << ": no sample decoded to a valid pose (NoValidSolution)\n";
    return 1;
  }
  return 0;
}

int run_dock(const RunConfig& cfg) {
  if (cfg.complex.empty() == cfg.dataset.empty()) throw UsageError("exactly one of --complex or --dataset is required");
  const auto hp = hyperparameters(cfg);
  const auto sampler = make_sampler(cfg, cfg.threads);
  std::vector<qdock::DockingReport> reports;
  if (!cfg.complex.empty()) {
    reports.push_back(qdock::dock(qdock::load_complex(cfg.complex), hp, *sampler, cfg.threads));
    return write_reports(cfg, reports, true);
  }
  for (const auto& file : dataset_files(cfg.dataset))
    reports.push_back(qdock::dock(qdock::load_complex(file), hp, *sampler, cfg.threads));
  return write_reports(cfg, reports, false);
}

int run_tune(const RunConfig& cfg) {
  require(cfg.dataset, "--dataset");
  std::vector<qdock::PreparedComplex> data;
  for (const auto& file : dataset_files(cfg.dataset)) data.push_back(qdock::prepare(qdock::load_complex(file), cfg.threads));

  qdock::Hyperparameters base;
  base.gamma = cfg.gamma;
  // Parallelism goes across (complex, candidate) evaluations.
  const auto sampler = make_sampler(cfg, 1);
  const auto result = qdock::greedy_tune(data, *sampler, cfg.weights, base, cfg.threads);
  emit(cfg.out, dump(qdock::to_json(result)));

  if (!cfg.csv.empty()) {
    qdock::Hyperparameters tuned = base;
    tuned.lambdas = result.lambdas;
    std::vector<qdock::DockingReport> reports;
    for (const auto& c : data) reports.push_back(qdock::dock(c, tuned, *sampler));
    std::ostringstream csv;
    qdock::write_metrics_csv(csv, reports);
    emit(cfg.csv, csv.str());
  }
  return 0;
}

int run_report(const RunConfig& cfg) {
  require(cfg.complex, "--complex");
  require(cfg.samples, "--samples");
  const auto input = qdock::load_complex(cfg.complex);
  const std::size_t n_vars = input.ligand_atoms.size() * input.grid_points.size();
  const qdock::ExternalSampler sampler(qdock::import_samples(cfg.samples, n_vars));
  std::vector<qdock::DockingReport> reports{qdock::dock(input, hyperparameters(cfg), sampler, cfg.threads)};
  return write_reports(cfg, reports, true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdock: molecular docking as a weighted subgraph isomorphism QUBO"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option defaults; explicit flags win");
  RunConfig cfg;

  auto add_complex = [&](CLI::App* sub) { sub->add_option("--complex", cfg.complex, "Complex JSON file"); };
  auto add_out = [&](CLI::App* sub, const char* what) { sub->add_option("--out", cfg.out, what); };
  auto add_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
  };
  auto add_weights = [&](CLI::App* sub) {
    sub->add_option("--lambdas", cfg.lambdas, "Weights el,vdw,hba,hbd,hydro")->delimiter(',');
    sub->add_option("--gamma", cfg.gamma, "Penalty weight (default: 10 x largest geometric coefficient)");
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--reads", cfg.reads, "Annealing reads (or states kept with --exact)")->check(CLI::PositiveNumber);
    sub->add_option("--sweeps", cfg.sweeps, "Sweeps per read")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--t-initial", cfg.t_initial, "Initial temperature");
    sub->add_option("--t-final", cfg.t_final, "Final temperature");
    sub->add_flag("--exact", cfg.exact, "Exhaustive enumeration instead of annealing (<= 24 variables)");
  };

  auto* graph = app.add_subcommand("graph", "Dump the extended ligand graph as JSON");
  add_complex(graph);
  add_out(graph, "Output JSON (default stdout)");

  auto* grid = app.add_subcommand("grid", "Dump pocket grid colourings as JSON");
  add_complex(grid);
  add_out(grid, "Output JSON (default stdout)");
  add_threads(grid);

  auto* build = app.add_subcommand("build", "Build the QUBO and write it as a coordinate list");
  add_complex(build);
  add_weights(build);
  add_out(build, "Output QUBO file");
  add_threads(build);

  auto* exp = app.add_subcommand("export", "Write the QUBO plus a variable layout for an external sampler");
  add_complex(exp);
  add_weights(exp);
  add_out(exp, "Output QUBO file");
  exp->add_option("--layout", cfg.layout, "Layout JSON (default <out>.layout.json)");
  add_threads(exp);

  auto* solve = app.add_subcommand("solve", "Sample a QUBO file");
  solve->add_option("--qubo", cfg.qubo, "QUBO coordinate file");
  add_sampling(solve);
  solve->add_option("--keep", cfg.keep, "Lowest states kept with --exact")->check(CLI::PositiveNumber);
  add_out(solve, "Output SampleSet JSON (default stdout)");
  add_threads(solve);

  auto* dock = app.add_subcommand("dock", "Build, solve, decode and score");
  add_complex(dock);
  dock->add_option("--dataset", cfg.dataset, "Directory of complex JSON files");
  add_weights(dock);
  add_sampling(dock);
  add_out(dock, "Output report JSON (default stdout)");
  dock->add_option("--csv", cfg.csv, "Metrics CSV, one row per complex");
  add_threads(dock);

  auto* tune = app.add_subcommand("tune", "Greedy selection of the physico-chemical weights");
  tune->add_option("--dataset", cfg.dataset, "Directory of complex JSON files");
  tune->add_option("--gamma", cfg.gamma, "Penalty weight (default: automatic per complex)");
  tune->add_option("--weights", cfg.weights, "Candidate weights")->delimiter(',');
  add_sampling(tune);
  add_out(tune, "Output tuner JSON (default stdout)");
  tune->add_option("--csv", cfg.csv, "Metrics CSV under the tuned weights");
  add_threads(tune);

  auto* report = app.add_subcommand("report", "Decode and score externally produced samples");
  add_complex(report);
  report->add_option("--samples", cfg.samples, "JSON array of bitstrings");
  add_weights(report);
  add_out(report, "Output report JSON (default stdout)");

  app.add_flag("-v,--verbose", cfg.verbosity, "Log progress to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (graph->parsed()) return run_graph(cfg);
    if (grid->parsed()) return run_grid(cfg);
    if (build->parsed()) return run_build(cfg);
    if (exp->parsed()) return run_export(cfg);
    if (solve->parsed()) return run_solve(cfg);
    if (dock->parsed()) return run_dock(cfg);
    if (tune->parsed()) return run_tune(cfg);
    if (report->parsed()) return run_report(cfg);
  } catch (const UsageError& e) {
    std::cerr << "qdock: " << e.what() << "\n";
    return 2;
  } catch (const qdock::Error& e) {
    std::cerr << "qdock: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "qdock: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
