#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qdmae {

struct ExperimentConfig {
  std::string domain = "sphere-100";
  std::string algorithm = "cma-mae";
  int psi = 5;
  int lambda = 40;
  long long iterations = 10000;
  double sigma0 = 0.02;
  double alpha = 0.001;
  double min_f = 0.0;
  std::vector<int> grid_dims = {100, 100};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string output_dir = "out";
  int k = 0;                       // lm-ma-mae: direction count; 0 => lambda
  double learning_rate = 0.01;     // openai-mae
  double l2_coeff = 0.005;         // openai-mae
  long long checkpoint_every = 0;  // 0 => archives written only at run end
  int eval_threads = 1;            // set from QD_THREADS, not the config file
  bool quiet = false;              // suppress progress lines (tests)
};

// Flat `key = value` file; '#' starts a comment; blank lines ignored.
// Unknown keys and malformed values throw std::invalid_argument naming the
// offending key. Does not validate cross-field consistency (see validate()).
ExperimentConfig load_config(const std::string& path);

// Apply one key/value pair (same keys as the config file). CLI flags reuse
// this so that flags win over file values.
void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Throws std::invalid_argument naming the invalid field.
void validate_config(const ExperimentConfig& config);

struct TrialSummary {
  std::uint64_t seed = 0;
  double qd_score = 0.0;
  double coverage = 0.0;
  double best = 0.0;
  long long restarts = 0;
  std::int64_t wall_time_ms = 0;
};

// Runs one trial per seed, writing trial_<seed>/{log.csv,result_archive.csv,
// soft_archive.csv,heatmap.csv} plus summary.csv (one row per seed and a
// final mean row). Returns the per-seed summaries.
std::vector<TrialSummary> run_experiment(const ExperimentConfig& config);

// Runs run_experiment once per alpha under alpha_<value>/ subtrees and writes
// a combined alpha_summary.csv. Throws on an empty list.
std::vector<std::pair<double, std::vector<TrialSummary>>> sweep_alpha(
    const ExperimentConfig& config, const std::vector<double>& alphas);

struct ComplexityRow {
  std::string variant;
  int n = 0;
  double us_per_solution = 0.0;
};

// Times ask+tell per sampled solution on a synthetic quadratic at each
// dimension, for each variant name. `samples` is the number of timed
// generations (stretched to cover two covariance-decomposition periods for
// the full-matrix variant so amortized costs are represented fairly).
std::vector<ComplexityRow> bench_complexity_rows(
    const std::vector<int>& dims, const std::vector<std::string>& variants,
    int samples);

// CSV text with header `variant,n,us_per_solution`.
std::string bench_complexity(const std::vector<int>& dims,
                             const std::vector<std::string>& variants,
                             int samples);

}  // namespace qdmae
