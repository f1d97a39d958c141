#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kpart/planted.hpp"
#include "kpart/sdp.hpp"

namespace kpart {

struct ExperimentConfig {
  Mode mode = Mode::Edge;
  int n = 12;
  std::vector<int> k{3};
  std::vector<double> eps{0.0};
  std::vector<double> lambda_min{0.5};
  std::vector<int> d{3};
  std::vector<double> r{1.0};
  std::vector<std::string> adversary{"none"};
  int replicates = 1;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  SolverConfig solver;
  bool complete = true;
  int workers = 1;
  int oracle_max_n = 12;  // exact oracle runs when n is at most this

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

// One row per (cell, replicate). Wall times are tracked separately so the
// record table reproduces byte-for-byte under a fixed seed.
struct ExperimentRecord {
  int cell = 0;
  int replicate = 0;
  std::string status = "ok";  // or "error: ..."
  Mode mode = Mode::Edge;
  int n = 0, k = 0, d = 0;
  double eps = 0, lambda_min = 0, r = 1;
  std::string adversary;
  std::uint64_t seed = 0;
  double achieved_lambda_min = 0;
  double premise_value = 0;
  bool premise_holds = false;
  int cross_edges = 0;
  double sdp_objective = 0;
  double integral_objective = 0;
  bool solver_converged = false;
  double resid_worst = 0;
  double spread_gap = 0;  // |sum_ij d(i,j) - 2 n^2 (1 - 1/k)|
  int ball_max = 0;       // max_i |B(i, 1/50)|
  std::string diag_bits = "------";  // one char per diagnostics check
  bool diag_all = false;
  int sets_found = 0;
  int min_set_size = 0;
  double max_set_expansion = 0;
  bool overlap_majority = false;
  double min_overlap_frac = 0;
  double completed_max_expansion = 0;
  double oracle_opt = -1;  // -1 when the oracle did not run
  bool oracle_sdp_ok = false;
  bool oracle_pipeline_ok = false;
  double seconds = 0;  // excluded from the CSV
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;
  std::string csv;      // deterministic record table
  std::string timings;  // wall-clock per row, separate file
  std::map<std::string, std::string> plots;  // filename -> svg
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Writes records.csv, timings.txt and the plot files into out_dir.
void write_experiment(const ExperimentOutput& out, const std::string& out_dir);

}  // namespace kpart
