#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qdmae/archive.hpp"
#include "qdmae/es/es.hpp"
#include "qdmae/rng.hpp"

namespace qdmae {

// One emitter: an evolution strategy paired with its own random stream.
struct Emitter {
  std::unique_ptr<EvolutionStrategy> es;
  Rng rng;
  long long restarts = 0;
};

struct SchedulerConfig {
  int psi = 1;                      // number of emitters
  long long iterations = 1;         // outer-loop iterations N
  int lambda = 2;                   // batch size per emitter
  double sigma0 = 0.02;             // initial step size (also restart scale)
  Eigen::VectorXd initial_solution; // phi_0: initial mean and restart fallback
  EsVariant variant = EsVariant::kFullCma;
  EsOptions es_options;
  int eval_threads = 1;             // parallel evaluations within a batch
};

struct IterationStats {
  long long iteration = 0;    // 1-based
  long long evaluations = 0;  // cumulative: iteration * psi * lambda
  double qd_score = 0.0;
  double coverage = 0.0;
  double best = 0.0;          // min_f when the archive is still empty
  int restarts_this_iter = 0;
  std::int64_t wall_time_ms = 0;  // cumulative wall-clock time
};

using EvaluateFn =
    std::function<std::pair<double, Eigen::VectorXd>(const Eigen::VectorXd&)>;

// Optional observation hooks, mainly for tests and diagnostics.
struct StepHooks {
  // Called once per evaluated solution, in emitter-then-batch-index order.
  // For solutions with non-finite objective/measures the InsertResult carries
  // improvement = -inf, accepted = false, cell = -1 (nothing was inserted).
  std::function<void(int emitter, int batch_index, const SolutionRecord&,
                     const InsertResult&)>
      on_insert;
  // Called once per emitter with the improvement ranking passed to tell.
  std::function<void(int emitter, const std::vector<int>& ranking)> on_ranking;
};

struct StepOptions {
  double sigma0 = 0.02;
  Eigen::VectorXd initial_solution;  // restart fallback when archive is empty
  int eval_threads = 1;
  long long iteration_index = 1;      // value recorded in the returned stats
  long long evaluations_before = 0;   // cumulative counters carried by run()
  std::int64_t wall_ms_before = 0;
  StepHooks hooks;
};

// One outer-loop iteration: for each emitter in index order, ask a batch,
// evaluate it, insert every solution into both archives (collecting the
// improvement values), rank by improvement, tell, and restart the emitter
// from a random soft-archive elite if its ES has converged.
IterationStats step(std::vector<Emitter>& emitters, SoftArchive& soft,
                    ResultArchive& result, const EvaluateFn& evaluate,
                    Rng& scheduler_rng, const StepOptions& options);

// Builds psi emitters with independent streams derived from the master seed
// (streams 0..psi-1; the scheduler stream used for restart elites is psi).
std::vector<Emitter> make_emitters(const SchedulerConfig& config,
                                   std::uint64_t master_seed);

struct RunResult {
  SoftArchive soft;
  ResultArchive result;
  std::vector<IterationStats> log;
  long long total_restarts = 0;
};

class Domain;  // domains.hpp

// Full run: N iterations over psi emitters against a fresh archive pair.
// Evaluates exactly N * psi * lambda solutions.
RunResult run(const SchedulerConfig& config, const Domain& domain,
              const std::vector<int>& grid_dims, double alpha, double min_f,
              std::uint64_t master_seed, const StepHooks& hooks = {});

}  // namespace qdmae
