// Command-line front end: `cluster` runs the full pipeline, `gen` writes a
// synthetic dataset, `bench` sweeps sample sizes for a scaling fit, and
// `metrics` rescores an existing labels file against a CSV.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "anchorfair/csv.hpp"
#include "anchorfair/metrics.hpp"
#include "anchorfair/pipeline.hpp"
#include "anchorfair/synthetic.hpp"

namespace {

using anchorfair::RunConfig;
using nlohmann::json;

void add_data_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--csv", config.csv_path, "CSV file with a header row");
  cmd->add_option("--group-col", config.group_column,
                  "sensitive attribute column (required with --csv)");
  cmd->add_option("--truth-col", config.truth_column,
                  "ground-truth column for ACC/NMI");
  cmd->add_option("--features", config.feature_columns,
                  "feature columns (default: all remaining)")
      ->delimiter(',');
  cmd->add_option("--synthetic", config.synthetic_n,
                  "generate this many synthetic samples instead of reading a CSV");
}

void add_solver_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("-k,--clusters", config.k, "number of clusters")
      ->default_val(config.k);
  cmd->add_option("-m,--anchors", config.m, "anchor count");
  cmd->add_option("--m-per-group", config.m_per_group,
                  "anchor count as a multiple of the group count");
  cmd->add_option("--operator", config.operator_name,
                  "anchor clustering plugin: lloyd | fairlet-kcenter")
      ->default_val(config.operator_name);
  cmd->add_option("--anchor-mode", config.anchor_mode,
                  "anchor selection: fdas | das | random")
      ->default_val(config.anchor_mode);
  cmd->add_option("--graph-mode", config.graph_mode,
                  "graph solve: fair | unconstrained")
      ->default_val(config.graph_mode);
  cmd->add_option("--alpha", config.solver.alpha, "ridge weight on Z")
      ->default_val(config.solver.alpha);
  cmd->add_option("--rho0", config.solver.rho0, "initial penalty")
      ->default_val(config.solver.rho0);
  cmd->add_option("--eps", config.solver.eps, "outer residual tolerance")
      ->default_val(config.solver.eps);
  cmd->add_option("--max-outer", config.solver.max_outer, "outer iteration cap")
      ->default_val(config.solver.max_outer);
  cmd->add_option("--max-inner", config.solver.max_inner,
                  "inner step budget per column")
      ->default_val(config.solver.max_inner);
  cmd->add_option("--threads", config.solver.threads,
                  "worker cap for column solves (0 = hardware)")
      ->default_val(config.solver.threads);
  cmd->add_option("--seed", config.seed, "RNG seed")->default_val(config.seed);
  cmd->add_option("-o,--out", config.out_dir,
                  "output directory for labels.tsv / record.json / trace.jsonl")
      ->envname("ANCHORFAIR_OUT_DIR");
}

void print_record(const anchorfair::RunRecord& record) {
  std::cout << "n=" << record.n << " d=" << record.d << " groups="
            << record.num_groups << " m=" << record.m << " k=" << record.k
            << "\n";
  std::cout << "anchor_balance=" << record.anchor_balance;
  if (record.target_balance) std::cout << " target_balance=" << *record.target_balance;
  std::cout << "\n";
  if (!record.trace.empty()) {
    std::cout << "admm: iterations=" << record.admm_iterations
              << (record.admm_converged ? " converged" : " NOT converged")
              << " objective=" << record.final_objective << "\n";
  }
  std::cout << "balance=" << record.metrics.balance;
  if (record.metrics.soft_balance) std::cout << " soft_balance=" << *record.metrics.soft_balance;
  if (record.metrics.mnce) std::cout << " mnce=" << *record.metrics.mnce;
  if (record.metrics.acc) std::cout << " acc=" << *record.metrics.acc;
  if (record.metrics.nmi) std::cout << " nmi=" << *record.metrics.nmi;
  std::cout << "\n";
  for (const auto& [stage, seconds] : record.timings) {
    std::cout << "time." << stage << "=" << seconds << "s\n";
  }
  if (!record.record_path.empty()) {
    std::cout << "wrote " << record.record_path << "\n";
  }
}

int run_cluster(RunConfig& config) {
  print_record(anchorfair::run_pipeline(config));
  return 0;
}

int run_gen(int n, unsigned long long seed, const anchorfair::SyntheticParams& params,
            const std::string& out_path) {
  const anchorfair::Dataset dataset = anchorfair::gen_synthetic(n, seed, params);
  anchorfair::save_csv(dataset, out_path);
  std::cout << "wrote " << out_path << " (" << dataset.n() << " samples, "
            << dataset.num_groups << " groups)\n";
  return 0;
}

int run_bench(RunConfig& config, const std::vector<int>& sizes, double budget,
              const std::string& out_dir) {
  config.csv_path.clear();
  const anchorfair::ScalingReport report =
      anchorfair::benchmark_scaling(config, sizes, budget);
  for (const anchorfair::ScalingPoint& point : report.points) {
    std::cout << "n=" << point.n << " total=" << point.timings.at("total")
              << "s graph=" << point.timings.at("graph_construction") << "s"
              << (point.converged ? "" : " (not converged)") << "\n";
  }
  if (report.points.size() >= 2) {
    std::cout << "fit: total = " << report.slope << "*n + " << report.intercept
              << "  R^2=" << report.r_squared
              << "  max step ratio=" << report.max_step_ratio << "\n";
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    json doc;
    doc["completed"] = report.completed;
    doc["slope"] = report.slope;
    doc["intercept"] = report.intercept;
    doc["r_squared"] = report.r_squared;
    doc["max_step_ratio"] = report.max_step_ratio;
    if (!report.error.empty()) doc["error"] = report.error;
    for (const anchorfair::ScalingPoint& point : report.points) {
      doc["points"].push_back({{"n", point.n},
                               {"timings", point.timings},
                               {"converged", point.converged}});
    }
    const std::string path =
        (std::filesystem::path(out_dir) / "scaling.json").string();
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
    std::cout << "wrote " << path << "\n";
  }
  if (!report.completed) {
    std::cerr << "error: benchmark aborted: " << report.error << "\n";
    return 1;
  }
  return 0;
}

int run_metrics(const anchorfair::CsvSpec& spec, const std::string& labels_path,
                int k) {
  const anchorfair::Dataset dataset = anchorfair::load_csv(spec);
  const std::vector<int> labels = anchorfair::read_labels_tsv(labels_path);
  if (static_cast<int>(labels.size()) != dataset.n()) {
    throw std::runtime_error("labels file has " + std::to_string(labels.size()) +
                             " rows, dataset has " + std::to_string(dataset.n()));
  }
  int max_label = 0;
  for (int l : labels) max_label = std::max(max_label, l);
  if (k == 0) k = max_label + 1;
  const anchorfair::MetricsBundle bundle =
      anchorfair::compute_metrics(labels, dataset, k);
  std::cout << "balance=" << bundle.balance;
  if (bundle.mnce) std::cout << " mnce=" << *bundle.mnce;
  if (bundle.acc) std::cout << " acc=" << *bundle.acc;
  if (bundle.nmi) std::cout << " nmi=" << *bundle.nmi;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anchor-based fair clustering"};
  app.require_subcommand(1);

  RunConfig cluster_config;
  CLI::App* cluster = app.add_subcommand("cluster", "run the full pipeline");
  add_data_options(cluster, cluster_config);
  add_solver_options(cluster, cluster_config);

  int gen_n = 1000;
  unsigned long long gen_seed = 0;
  anchorfair::SyntheticParams gen_params;
  std::string gen_out = "synthetic.csv";
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic CSV dataset");
  gen->add_option("-n,--samples", gen_n, "sample count")->default_val(gen_n);
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(gen_seed);
  gen->add_option("--p0", gen_params.group0_given_cluster0,
                  "P(group 0 | cluster 0)")
      ->default_val(gen_params.group0_given_cluster0);
  gen->add_option("--p1", gen_params.group0_given_cluster1,
                  "P(group 0 | cluster 1)")
      ->default_val(gen_params.group0_given_cluster1);
  gen->add_option("-o,--out", gen_out, "output CSV path")->default_val(gen_out);

  RunConfig bench_config;
  std::vector<int> bench_sizes{10000, 20000, 40000};
  double bench_budget = 1800.0;
  CLI::App* bench = app.add_subcommand("bench", "scaling sweep over sample sizes");
  add_solver_options(bench, bench_config);
  bench->add_option("--sizes", bench_sizes, "sample sizes, ascending")
      ->delimiter(',');
  bench->add_option("--budget", bench_budget, "wall-clock budget in seconds")
      ->default_val(bench_budget);

  anchorfair::CsvSpec metrics_spec;
  std::string metrics_labels;
  int metrics_k = 0;
  CLI::App* metrics = app.add_subcommand("metrics", "rescore a labels file");
  metrics->add_option("--csv", metrics_spec.path, "CSV file")->required();
  metrics->add_option("--group-col", metrics_spec.group_column,
                      "sensitive attribute column")
      ->required();
  metrics->add_option("--truth-col", metrics_spec.truth_column,
                      "ground-truth column");
  metrics->add_option("--features", metrics_spec.feature_columns,
                      "feature columns")
      ->delimiter(',');
  metrics->add_option("--labels", metrics_labels, "labels.tsv to rescore")
      ->required();
  metrics->add_option("-k,--clusters", metrics_k,
                      "cluster count (default: inferred from labels)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) return run_cluster(cluster_config);
    if (gen->parsed()) return run_gen(gen_n, gen_seed, gen_params, gen_out);
    if (bench->parsed()) return run_bench(bench_config, bench_sizes, bench_budget, bench_config.out_dir);
    if (metrics->parsed()) return run_metrics(metrics_spec, metrics_labels, metrics_k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
