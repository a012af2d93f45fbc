#include "qdmae/scheduler.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qdmae/domains.hpp"
#include "qdmae/metrics.hpp"

namespace qdmae {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void evaluate_batch(const Eigen::MatrixXd& candidates,
                    const EvaluateFn& evaluate, int threads,
                    std::vector<SolutionRecord>& out) {
  const int lambda = static_cast<int>(candidates.cols());
  out.resize(static_cast<std::size_t>(lambda));
  const auto eval_range = [&](int begin, int end) {
    for (int j = begin; j < end; ++j) {
      auto& rec = out[static_cast<std::size_t>(j)];
      rec.params = candidates.col(j);
      auto [objective, measures] = evaluate(rec.params);
      rec.objective = objective;
      rec.measures = std::move(measures);
    }
  };
  if (threads <= 1 || lambda <= 1) {
    eval_range(0, lambda);
    return;
  }
  const int workers = std::min(threads, lambda);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const int chunk = (lambda + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int begin = w * chunk;
    const int end = std::min(lambda, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(eval_range, begin, end);
  }
  for (auto& t : pool) t.join();
}

bool record_is_finite(const SolutionRecord& rec) {
  return std::isfinite(rec.objective) && rec.measures.allFinite();
}

}  // namespace

IterationStats step(std::vector<Emitter>& emitters, SoftArchive& soft,
                    ResultArchive& result, const EvaluateFn& evaluate,
                    Rng& scheduler_rng, const StepOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  IterationStats stats;
  stats.iteration = options.iteration_index;

  long long evals_this_step = 0;
  for (std::size_t e = 0; e < emitters.size(); ++e) {
    Emitter& emitter = emitters[e];
    EvolutionStrategy& es = *emitter.es;
    const int lambda = es.batch_size();

    const Eigen::MatrixXd candidates = es.ask(emitter.rng);
    std::vector<SolutionRecord> solutions;
    evaluate_batch(candidates, evaluate, options.eval_threads, solutions);
    evals_this_step += lambda;

    // Insert in batch-index order so later solutions see updated thresholds.
    std::vector<double> improvements(solutions.size());
    std::vector<double> rank_objectives(solutions.size());
    std::vector<char> accepted(solutions.size(), 0);
    for (std::size_t j = 0; j < solutions.size(); ++j) {
      InsertResult ir;
      if (record_is_finite(solutions[j])) {
        ir = insert(soft, result, solutions[j]);
        rank_objectives[j] = solutions[j].objective;
      } else {
        // Domain numerical blowup: rank last, never insert.
        ir.improvement = kNegInf;
        ir.accepted = false;
        ir.cell = -1;
        rank_objectives[j] = kNegInf;
      }
      improvements[j] = ir.improvement;
      accepted[j] = ir.accepted ? 1 : 0;
      if (options.hooks.on_insert) {
        options.hooks.on_insert(static_cast<int>(e), static_cast<int>(j),
                                solutions[j], ir);
      }
    }

    RankedBatch batch;
    batch.ranking = rank_by_improvement(improvements, rank_objectives);
    batch.solutions = std::move(solutions);
    batch.improvements = std::move(improvements);
    batch.accepted = std::move(accepted);
    if (options.hooks.on_ranking) {
      options.hooks.on_ranking(static_cast<int>(e), batch.ranking);
    }

    es.tell(batch);

    if (es.needs_restart()) {
      Eigen::VectorXd new_mean;
      if (soft.occupied_count() > 0) {
        new_mean = soft.random_elite(scheduler_rng).params;
      } else if (options.initial_solution.size() == es.dimension()) {
        new_mean = options.initial_solution;
      } else {
        new_mean = Eigen::VectorXd::Zero(es.dimension());
      }
      es.reset(new_mean, options.sigma0);
      ++emitter.restarts;
      ++stats.restarts_this_iter;
    }
  }

  stats.evaluations = options.evaluations_before + evals_this_step;
  const MetricsReport report = summarize(result, soft.min_f(), 0);
  stats.qd_score = report.qd_score;
  stats.coverage = report.coverage;
  stats.best = report.best.value_or(soft.min_f());

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  stats.wall_time_ms = options.wall_ms_before + elapsed.count();
  return stats;
}

std::vector<Emitter> make_emitters(const SchedulerConfig& config,
                                   std::uint64_t master_seed) {
  std::vector<Emitter> emitters;
  emitters.reserve(static_cast<std::size_t>(config.psi));
  for (int i = 0; i < config.psi; ++i) {
    emitters.push_back(Emitter{
        make_es(config.variant, config.initial_solution, config.sigma0,
                config.lambda, config.es_options),
        Rng::derive(master_seed, static_cast<std::uint64_t>(i)), 0});
  }
  return emitters;
}

RunResult run(const SchedulerConfig& config, const Domain& domain,
              const std::vector<int>& grid_dims, double alpha, double min_f,
              std::uint64_t master_seed, const StepHooks& hooks) {
  if (config.psi < 1) throw std::invalid_argument("psi: must be >= 1");
  if (config.iterations < 0) {
    throw std::invalid_argument("iterations: must be >= 0");
  }
  if (config.lambda < 2) throw std::invalid_argument("lambda: must be >= 2");
  if (!(config.sigma0 > 0.0)) {
    throw std::invalid_argument("sigma0: must be > 0");
  }
  if (config.initial_solution.size() != domain.dimension()) {
    throw std::invalid_argument(
        "initial_solution: dimension does not match the domain");
  }
  auto [lower, upper] = domain.measure_bounds();
  if (static_cast<int>(grid_dims.size()) != lower.size()) {
    throw std::invalid_argument(
        "grid_dims: dimension does not match the domain's measure space");
  }
  GridSpec spec(grid_dims, lower, upper);

  RunResult out{SoftArchive(spec, alpha, min_f), ResultArchive(spec), {}, 0};
  std::vector<Emitter> emitters = make_emitters(config, master_seed);
  Rng scheduler_rng =
      Rng::derive(master_seed, static_cast<std::uint64_t>(config.psi));
  const EvaluateFn evaluate = [&domain](const Eigen::VectorXd& x) {
    return domain.evaluate(x);
  };

  StepOptions options;
  options.sigma0 = config.sigma0;
  options.initial_solution = config.initial_solution;
  options.eval_threads = config.eval_threads;
  options.hooks = hooks;

  out.log.reserve(static_cast<std::size_t>(config.iterations));
  const auto run_start = std::chrono::steady_clock::now();
  for (long long it = 1; it <= config.iterations; ++it) {
    options.iteration_index = it;
    IterationStats stats =
        step(emitters, out.soft, out.result, evaluate, scheduler_rng, options);
    options.evaluations_before = stats.evaluations;
    // Anchor to the run clock: per-step ms measurements truncate to zero for
    // sub-millisecond iterations and would under-count the total.
    stats.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - run_start)
                             .count();
    out.log.push_back(stats);
  }
  for (const Emitter& emitter : emitters) {
    out.total_restarts += emitter.restarts;
  }
  return out;
}

}  // namespace qdmae
