#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anchorfair/admm.hpp"
#include "anchorfair/synthetic.hpp"
#include "anchorfair/types.hpp"

namespace anchorfair {

// One full run: ingest -> anchor selection -> anchor clustering -> graph
// solve -> propagation -> metrics. Exactly one data source: csv_path, or
// synthetic_n > 0 for generated data.
struct RunConfig {
  std::string csv_path;
  std::string group_column;
  std::string truth_column;
  std::vector<std::string> feature_columns;
  int synthetic_n = 0;
  SyntheticParams synthetic;

  int k = 2;
  int m = 0;           // absolute anchor count; 0 defers to m_per_group
  int m_per_group = 0; // m = m_per_group * (number of groups)
  std::string operator_name = "lloyd";     // lloyd | fairlet-kcenter
  std::string anchor_mode = "fdas";        // fdas | das | random
  std::string graph_mode = "fair";         // fair | unconstrained
  SolverConfig solver;
  unsigned long long seed = 0;
  std::string out_dir;  // empty = no files written
};

struct RunRecord {
  int n = 0;
  int d = 0;
  int num_groups = 0;
  int k = 0;
  int m = 0;
  MetricsBundle metrics;
  double anchor_balance = 0.0;               // from anchor joint counts
  std::optional<double> target_balance;      // from constraint targets (fair mode)
  std::map<std::string, double> timings;     // seconds, per stage + "total"
  int admm_iterations = 0;
  bool admm_converged = true;                // vacuously true when unconstrained
  double final_objective = 0.0;
  std::vector<int> labels;
  std::vector<AdmmTraceEntry> trace;         // empty when unconstrained
  std::string labels_path;                   // set when files were written
  std::string trace_path;
  std::string record_path;
};

// Runs the pipeline; any stage failure is rethrown with the stage name
// prefixed, and files already written for this run are removed. When
// config.out_dir is set, writes labels.tsv, record.json, and (fair mode)
// trace.jsonl into it.
RunRecord run_pipeline(const RunConfig& config);

// Hard-label export/import: one "index<TAB>label" line per sample,
// zero-based and gap-free.
void write_labels_tsv(const std::vector<int>& labels, const std::string& path);
std::vector<int> read_labels_tsv(const std::string& path);

struct ScalingPoint {
  int n = 0;
  std::map<std::string, double> timings;
  bool converged = true;
};

struct ScalingReport {
  std::vector<ScalingPoint> points;
  double slope = 0.0;      // seconds per sample, least-squares fit
  double intercept = 0.0;
  double r_squared = 0.0;
  double max_step_ratio = 0.0;  // max total-time ratio between consecutive sizes
  bool completed = false;
  std::string error;  // set when the sweep aborted early
};

// Runs the synthetic pipeline at each size (ascending, at least 3) and fits
// total time against n. A failed run or an exhausted wall-clock budget
// aborts the sweep; the report keeps the finished points either way.
ScalingReport benchmark_scaling(const RunConfig& base,
                                const std::vector<int>& sizes,
                                double budget_seconds = 1800.0);

}  // namespace anchorfair
