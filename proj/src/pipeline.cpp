#include "anchorfair/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "anchorfair/anchor_clustering.hpp"
#include "anchorfair/core.hpp"
#include "anchorfair/csv.hpp"
#include "anchorfair/fdas.hpp"
#include "anchorfair/metrics.hpp"
#include "anchorfair/propagation.hpp"

namespace anchorfair {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

json record_to_json(const RunConfig& config, const RunRecord& record) {
  json doc;
  doc["config"] = {
      {"source", config.csv_path.empty() ? "synthetic" : config.csv_path},
      {"k", config.k},
      {"m", record.m},
      {"operator", config.operator_name},
      {"anchor_mode", config.anchor_mode},
      {"graph_mode", config.graph_mode},
      {"seed", config.seed},
      {"alpha", config.solver.alpha},
      {"rho0", config.solver.rho0},
      {"eps", config.solver.eps},
      {"max_outer", config.solver.max_outer},
      {"max_inner", config.solver.max_inner},
      {"threads", config.solver.threads},
  };
  if (config.m == 0 && config.m_per_group > 0) {
    doc["config"]["m_per_group"] = config.m_per_group;  // m was derived
  }
  doc["data"] = {{"n", record.n}, {"d", record.d}, {"num_groups", record.num_groups}};
  doc["anchors"] = {{"m", record.m}, {"anchor_balance", record.anchor_balance}};
  if (record.target_balance) {
    doc["anchors"]["target_balance"] = *record.target_balance;
  }
  doc["graph"] = {{"iterations", record.admm_iterations},
                  {"converged", record.admm_converged},
                  {"final_objective", record.final_objective}};
  doc["metrics"] = {{"balance", record.metrics.balance}};
  if (record.metrics.soft_balance) doc["metrics"]["soft_balance"] = *record.metrics.soft_balance;
  if (record.metrics.mnce) doc["metrics"]["mnce"] = *record.metrics.mnce;
  if (record.metrics.acc) doc["metrics"]["acc"] = *record.metrics.acc;
  if (record.metrics.nmi) doc["metrics"]["nmi"] = *record.metrics.nmi;
  doc["timings"] = record.timings;
  if (!record.labels_path.empty()) doc["files"]["labels"] = record.labels_path;
  if (!record.trace_path.empty()) doc["files"]["trace"] = record.trace_path;
  return doc;
}

void write_outputs(const RunConfig& config, RunRecord& record) {
  const fs::path dir(config.out_dir);
  std::vector<fs::path> written;
  try {
    fs::create_directories(dir);

    const fs::path labels_path = dir / "labels.tsv";
    write_labels_tsv(record.labels, labels_path.string());
    written.push_back(labels_path);
    record.labels_path = labels_path.string();

    if (!record.trace.empty()) {
      const fs::path trace_path = dir / "trace.jsonl";
      std::ofstream trace(trace_path);
      if (!trace) throw std::runtime_error("cannot write " + trace_path.string());
      for (const AdmmTraceEntry& entry : record.trace) {
        trace << json{{"iteration", entry.iteration},
                      {"objective", entry.objective},
                      {"primal_residual", entry.primal_residual},
                      {"dual_residual", entry.dual_residual},
                      {"rho", entry.rho}}
                     .dump()
              << "\n";
      }
      if (!trace.good()) throw std::runtime_error("write to " + trace_path.string() + " failed");
      written.push_back(trace_path);
      record.trace_path = trace_path.string();
    }

    const fs::path record_path = dir / "record.json";
    std::ofstream out(record_path);
    if (!out) throw std::runtime_error("cannot write " + record_path.string());
    out << record_to_json(config, record).dump(2) << "\n";
    if (!out.good()) throw std::runtime_error("write to " + record_path.string() + " failed");
    record.record_path = record_path.string();
  } catch (const std::exception& e) {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw std::runtime_error(std::string("stage output: ") + e.what());
  }
}

}  // namespace

void write_labels_tsv(const std::vector<int>& labels, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  for (size_t i = 0; i < labels.size(); ++i) {
    file << i << "\t" << labels[i] << "\n";
  }
  if (!file.good()) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<int> read_labels_tsv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<int> labels;
  long long index = 0, label = 0;
  while (file >> index >> label) {
    if (index != static_cast<long long>(labels.size())) {
      throw std::runtime_error("labels file '" + path +
                               "' has a gap at index " + std::to_string(index));
    }
    labels.push_back(static_cast<int>(label));
  }
  if (labels.empty()) throw std::runtime_error("'" + path + "' holds no labels");
  return labels;
}

RunRecord run_pipeline(const RunConfig& config) {
  if (config.k < 2) throw std::invalid_argument("need k >= 2");
  if (config.csv_path.empty() == (config.synthetic_n == 0)) {
    throw std::invalid_argument("specify exactly one data source: csv_path or synthetic_n");
  }

  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  auto run_stage = [&](const std::string& stage, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& e) {
      throw std::runtime_error("stage " + stage + ": " + e.what());
    }
    record.timings[stage] = seconds_since(t0);
  };

  Dataset dataset;
  run_stage("load", [&] {
    if (!config.csv_path.empty()) {
      dataset = load_csv({config.csv_path, config.group_column,
                          config.truth_column, config.feature_columns});
    } else {
      dataset = gen_synthetic(config.synthetic_n, config.seed, config.synthetic);
    }
  });
  record.n = dataset.n();
  record.d = dataset.d();
  record.num_groups = dataset.num_groups;
  record.k = config.k;

  int m = config.m;
  if (m == 0 && config.m_per_group > 0) m = config.m_per_group * dataset.num_groups;
  if (m < config.k) {
    throw std::invalid_argument("anchor count " + std::to_string(m) +
                                " is below k=" + std::to_string(config.k) +
                                "; set m or m_per_group");
  }
  record.m = m;
  if (dataset.truth) {
    const std::set<int> distinct(dataset.truth->begin(), dataset.truth->end());
    if (static_cast<int>(distinct.size()) < config.k) {
      std::cerr << "warning: ground truth has " << distinct.size()
                << " distinct labels, fewer than k=" << config.k << "\n";
    }
  }

  AnchorSet anchors;
  run_stage("anchor_selection", [&] {
    if (config.anchor_mode == "fdas") {
      anchors = select_anchors(dataset, m);
    } else if (config.anchor_mode == "das") {
      anchors = select_anchors_ungrouped(dataset, m);
    } else if (config.anchor_mode == "random") {
      anchors = select_anchors_random(dataset, m, config.seed);
    } else {
      throw std::invalid_argument("unknown anchor mode '" + config.anchor_mode +
                                  "' (available: fdas, das, random)");
    }
  });

  AnchorLabeling labeling;
  run_stage("anchor_clustering", [&] {
    const auto op = make_operator(config.operator_name, config.seed);
    labeling = run_operator(*op, anchors, config.k);
  });
  record.anchor_balance =
      balance_from_masses(labeling.joint_counts.cast<double>());

  AnchorGraph graph;
  run_stage("graph_construction", [&] {
    if (config.graph_mode == "fair") {
      AdmmSolveResult solved =
          solve_fair_graph(dataset, anchors, labeling, config.solver);
      graph = std::move(solved.graph);
      record.admm_iterations = solved.state.iteration;
      record.admm_converged = solved.converged;
      record.final_objective = solved.state.trace.back().objective;
      record.trace = std::move(solved.state.trace);
      record.target_balance = balance_from_masses(
          build_constraint_table(labeling, dataset).targets);
    } else if (config.graph_mode == "unconstrained") {
      graph = solve_unconstrained_graph(dataset, anchors, config.solver);
      record.final_objective = graph_objective(dataset.features, anchors.H,
                                               graph.Z, config.solver.alpha);
    } else {
      throw std::invalid_argument("unknown graph mode '" + config.graph_mode +
                                  "' (available: fair, unconstrained)");
    }
  });

  ClusterResult clustering;
  run_stage("propagation", [&] { clustering = propagate(graph, labeling); });
  record.labels = std::move(clustering.hard_labels);

  run_stage("metrics", [&] {
    record.metrics =
        compute_metrics(record.labels, dataset, config.k, &graph, &labeling);
  });

  if (!config.out_dir.empty()) {
    write_outputs(config, record);
  }
  record.timings["total"] = seconds_since(start);
  return record;
}

ScalingReport benchmark_scaling(const RunConfig& base,
                                const std::vector<int>& sizes,
                                double budget_seconds) {
  if (sizes.size() < 3) {
    throw std::invalid_argument("need at least 3 sizes for a scaling fit");
  }
  for (size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("sizes must be strictly increasing");
    }
  }
  if (!base.csv_path.empty()) {
    throw std::invalid_argument("the scaling benchmark generates its own data; "
                                "drop the csv source");
  }

  ScalingReport report;
  const auto start = std::chrono::steady_clock::now();
  for (int n : sizes) {
    if (seconds_since(start) > budget_seconds) {
      report.error = "wall-clock budget of " + std::to_string(budget_seconds) +
                     "s exhausted before n=" + std::to_string(n);
      break;
    }
    RunConfig config = base;
    config.synthetic_n = n;
    config.out_dir.clear();  // keep timing free of filesystem noise
    try {
      RunRecord record = run_pipeline(config);
      report.points.push_back({n, record.timings, record.admm_converged});
    } catch (const std::exception& e) {
      report.error = "n=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  report.completed = report.points.size() == sizes.size();

  if (report.points.size() >= 2) {
    const size_t count = report.points.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const ScalingPoint& point : report.points) {
      const double x = point.n, y = point.timings.at("total");
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    report.slope = (count * sxy - sx * sy) / denom;
    report.intercept = (sy - report.slope * sx) / count;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / count;
    for (const ScalingPoint& point : report.points) {
      const double y = point.timings.at("total");
      const double fit = report.slope * point.n + report.intercept;
      ss_res += (y - fit) * (y - fit);
      ss_tot += (y - mean_y) * (y - mean_y);
    }
    report.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    for (size_t i = 1; i < count; ++i) {
      report.max_step_ratio = std::max(
          report.max_step_ratio, report.points[i].timings.at("total") /
                                     report.points[i - 1].timings.at("total"));
    }
  }
  return report;
}

}  // namespace anchorfair
