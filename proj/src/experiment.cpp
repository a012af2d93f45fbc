#include "qdmae/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "qdmae/csv.hpp"
#include "qdmae/domains.hpp"
#include "qdmae/es/es.hpp"
#include "qdmae/metrics.hpp"
#include "qdmae/scheduler.hpp"

namespace fs = std::filesystem;

namespace qdmae {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

long long parse_int_field(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(key + ": not an integer: '" + value + "'");
  }
  return out;
}

double parse_double_field(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(key + ": not a number: '" + value + "'");
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  for (char c : value) {
    if (c == ',' || c == 'x' || c == ' ') {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) items.push_back(item);
  return items;
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path.string());
  }
  return out;
}

void write_summary_row(std::ofstream& out, const std::string& seed_label,
                       double qd, double coverage, double best,
                       double restarts, double wall_ms) {
  out << seed_label << ',' << csv::format_double(qd) << ','
      << csv::format_double(coverage) << ',' << csv::format_double(best) << ','
      << csv::format_double(restarts) << ',' << csv::format_double(wall_ms)
      << '\n';
}

TrialSummary mean_summary(const std::vector<TrialSummary>& rows) {
  TrialSummary mean;
  if (rows.empty()) return mean;
  for (const TrialSummary& r : rows) {
    mean.qd_score += r.qd_score;
    mean.coverage += r.coverage;
    mean.best += r.best;
    mean.restarts += r.restarts;
    mean.wall_time_ms += r.wall_time_ms;
  }
  const double k = static_cast<double>(rows.size());
  mean.qd_score /= k;
  mean.coverage /= k;
  mean.best /= k;
  return mean;  // restarts/wall_time_ms left as sums; callers divide as needed
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + text +
                                  "'");
    }
    apply_override(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
  }
  return config;
}

void apply_override(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "domain") {
    config.domain = value;
  } else if (key == "algorithm") {
    config.algorithm = value;
  } else if (key == "output_dir") {
    config.output_dir = value;
  } else if (key == "psi") {
    config.psi = static_cast<int>(parse_int_field(key, value));
  } else if (key == "lambda") {
    config.lambda = static_cast<int>(parse_int_field(key, value));
  } else if (key == "iterations") {
    config.iterations = parse_int_field(key, value);
  } else if (key == "k") {
    config.k = static_cast<int>(parse_int_field(key, value));
  } else if (key == "checkpoint_every") {
    config.checkpoint_every = parse_int_field(key, value);
  } else if (key == "sigma0") {
    config.sigma0 = parse_double_field(key, value);
  } else if (key == "alpha") {
    config.alpha = parse_double_field(key, value);
  } else if (key == "min_f") {
    config.min_f = parse_double_field(key, value);
  } else if (key == "learning_rate") {
    config.learning_rate = parse_double_field(key, value);
  } else if (key == "l2_coeff") {
    config.l2_coeff = parse_double_field(key, value);
  } else if (key == "grid_dims") {
    std::vector<int> dims;
    for (const std::string& item : split_list(value)) {
      dims.push_back(static_cast<int>(parse_int_field(key, item)));
    }
    config.grid_dims = std::move(dims);
  } else if (key == "seeds") {
    std::vector<std::uint64_t> seeds;
    for (const std::string& item : split_list(value)) {
      seeds.push_back(static_cast<std::uint64_t>(parse_int_field(key, item)));
    }
    config.seeds = std::move(seeds);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

void validate_config(const ExperimentConfig& config) {
  es_variant_from_name(config.algorithm);  // throws naming `algorithm`
  make_domain(config.domain);              // throws naming `domain`
  if (config.psi < 1) throw std::invalid_argument("psi: must be >= 1");
  if (config.lambda < 2) throw std::invalid_argument("lambda: must be >= 2");
  if (config.iterations < 0) {
    throw std::invalid_argument("iterations: must be >= 0");
  }
  if (!(config.sigma0 > 0.0)) {
    throw std::invalid_argument("sigma0: must be > 0");
  }
  if (!(config.alpha >= 0.0 && config.alpha <= 1.0)) {
    throw std::invalid_argument("alpha: must be in [0, 1]");
  }
  if (config.grid_dims.size() != 2) {
    throw std::invalid_argument("grid_dims: expected two entries, e.g. 100x100");
  }
  for (int d : config.grid_dims) {
    if (d < 1) throw std::invalid_argument("grid_dims: entries must be >= 1");
  }
  if (config.seeds.empty()) {
    throw std::invalid_argument("seeds: at least one seed required");
  }
  if (config.k < 0) throw std::invalid_argument("k: must be >= 0");
  if (!(config.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate: must be > 0");
  }
  if (config.l2_coeff < 0.0) {
    throw std::invalid_argument("l2_coeff: must be >= 0");
  }
  if (config.checkpoint_every < 0) {
    throw std::invalid_argument("checkpoint_every: must be >= 0");
  }
  if (config.eval_threads < 1) {
    throw std::invalid_argument("eval_threads: must be >= 1 (QD_THREADS)");
  }
}

std::vector<TrialSummary> run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto domain = make_domain(config.domain);
  const long long budget =
      config.iterations * config.psi * config.lambda;
  if (!config.quiet) {
    std::cout << "[qdmae] " << config.domain << " / " << config.algorithm
              << ": N=" << config.iterations << " psi=" << config.psi
              << " lambda=" << config.lambda << " alpha=" << config.alpha
              << " -> " << budget << " evaluations per trial, "
              << config.seeds.size() << " seed(s)" << std::endl;
  }

  SchedulerConfig sc;
  sc.psi = config.psi;
  sc.iterations = config.iterations;
  sc.lambda = config.lambda;
  sc.sigma0 = config.sigma0;
  sc.initial_solution = Eigen::VectorXd::Zero(domain->dimension());
  sc.variant = es_variant_from_name(config.algorithm);
  sc.es_options.k = config.k;
  sc.es_options.learning_rate = config.learning_rate;
  sc.es_options.l2_coeff = config.l2_coeff;
  sc.eval_threads = config.eval_threads;

  auto [lower, upper] = domain->measure_bounds();
  const GridSpec spec(config.grid_dims, lower, upper);
  fs::create_directories(config.output_dir);

  std::vector<TrialSummary> summaries;
  for (std::uint64_t seed : config.seeds) {
    const fs::path trial_dir =
        fs::path(config.output_dir) / ("trial_" + std::to_string(seed));
    fs::create_directories(trial_dir);

    SoftArchive soft(spec, config.alpha, config.min_f);
    ResultArchive result(spec);
    std::vector<Emitter> emitters = make_emitters(sc, seed);
    Rng scheduler_rng =
        Rng::derive(seed, static_cast<std::uint64_t>(config.psi));
    const EvaluateFn evaluate = [&domain](const Eigen::VectorXd& x) {
      return domain->evaluate(x);
    };

    StepOptions options;
    options.sigma0 = sc.sigma0;
    options.initial_solution = sc.initial_solution;
    options.eval_threads = sc.eval_threads;

    std::vector<IterationStats> log;
    log.reserve(static_cast<std::size_t>(config.iterations));
    const long long cadence = std::max<long long>(1, config.iterations / 10);
    const auto trial_start = std::chrono::steady_clock::now();
    for (long long it = 1; it <= config.iterations; ++it) {
      options.iteration_index = it;
      IterationStats stats =
          step(emitters, soft, result, evaluate, scheduler_rng, options);
      options.evaluations_before = stats.evaluations;
      // Anchor to the trial clock: per-step ms measurements truncate to zero
      // for sub-millisecond iterations and would under-count the total.
      stats.wall_time_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(
              std::chrono::steady_clock::now() - trial_start)
              .count();
      log.push_back(stats);
      if (!config.quiet && config.iterations >= 50 &&
          (it % cadence == 0 || it == config.iterations)) {
        std::cout << "[qdmae] seed " << seed << " iter " << it << "/"
                  << config.iterations << " qd_score=" << stats.qd_score
                  << " coverage=" << stats.coverage << " best=" << stats.best
                  << std::endl;
      }
      if (config.checkpoint_every > 0 && it % config.checkpoint_every == 0 &&
          it < config.iterations) {
        csv::write_result_archive((trial_dir / "result_archive.csv").string(),
                                  result);
        csv::write_soft_archive((trial_dir / "soft_archive.csv").string(),
                                soft);
      }
    }

    csv::write_log((trial_dir / "log.csv").string(), log);
    csv::write_result_archive((trial_dir / "result_archive.csv").string(),
                              result);
    csv::write_soft_archive((trial_dir / "soft_archive.csv").string(), soft);
    if (spec.measure_dims() == 2) {
      csv::write_heatmap((trial_dir / "heatmap.csv").string(), result);
    }

    TrialSummary ts;
    ts.seed = seed;
    if (!log.empty()) {
      ts.qd_score = log.back().qd_score;
      ts.coverage = log.back().coverage;
      ts.best = log.back().best;
      ts.wall_time_ms = log.back().wall_time_ms;
    } else {
      ts.best = config.min_f;
    }
    for (const Emitter& e : emitters) ts.restarts += e.restarts;
    summaries.push_back(ts);
    if (!config.quiet) {
      std::cout << "[qdmae] seed " << seed << " done: qd_score=" << ts.qd_score
                << " coverage=" << ts.coverage << " best=" << ts.best
                << " restarts=" << ts.restarts << " wall_time_ms="
                << ts.wall_time_ms << std::endl;
    }
  }

  std::ofstream out = open_for_write(fs::path(config.output_dir) /
                                     "summary.csv");
  out << "seed,qd_score,coverage,best,restarts,wall_time_ms\n";
  for (const TrialSummary& ts : summaries) {
    write_summary_row(out, std::to_string(ts.seed), ts.qd_score, ts.coverage,
                      ts.best, static_cast<double>(ts.restarts),
                      static_cast<double>(ts.wall_time_ms));
  }
  const TrialSummary totals = mean_summary(summaries);
  const double k = static_cast<double>(summaries.size());
  write_summary_row(out, "mean", totals.qd_score, totals.coverage, totals.best,
                    static_cast<double>(totals.restarts) / k,
                    static_cast<double>(totals.wall_time_ms) / k);
  return summaries;
}

std::vector<std::pair<double, std::vector<TrialSummary>>> sweep_alpha(
    const ExperimentConfig& config, const std::vector<double>& alphas) {
  if (alphas.empty()) {
    throw std::invalid_argument("alphas: at least one value required");
  }
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("alphas: values must be in [0, 1]");
    }
  }
  validate_config(config);

  std::vector<std::pair<double, std::vector<TrialSummary>>> results;
  for (double alpha : alphas) {
    ExperimentConfig sub = config;
    sub.alpha = alpha;
    sub.output_dir = (fs::path(config.output_dir) /
                      ("alpha_" + csv::format_double(alpha)))
                         .string();
    results.emplace_back(alpha, run_experiment(sub));
  }

  fs::create_directories(config.output_dir);
  std::ofstream out = open_for_write(fs::path(config.output_dir) /
                                     "alpha_summary.csv");
  out << "alpha,seed,qd_score,coverage,best,restarts,wall_time_ms\n";
  for (const auto& [alpha, summaries] : results) {
    const std::string prefix = csv::format_double(alpha) + ",";
    for (const TrialSummary& ts : summaries) {
      out << prefix;
      write_summary_row(out, std::to_string(ts.seed), ts.qd_score, ts.coverage,
                        ts.best, static_cast<double>(ts.restarts),
                        static_cast<double>(ts.wall_time_ms));
    }
    const TrialSummary totals = mean_summary(summaries);
    const double k = static_cast<double>(summaries.size());
    out << prefix;
    write_summary_row(out, "mean", totals.qd_score, totals.coverage,
                      totals.best, static_cast<double>(totals.restarts) / k,
                      static_cast<double>(totals.wall_time_ms) / k);
  }
  return results;
}

namespace {

// One timed block: `gens` generations of ask+tell on a synthetic quadratic,
// returning the summed ask+tell time in microseconds (evaluation and ranking
// excluded from the timer).
double time_ask_tell_us(EvolutionStrategy& es, Rng& rng, int gens) {
  using clock = std::chrono::steady_clock;
  const int lambda = es.batch_size();
  const Eigen::VectorXd target =
      Eigen::VectorXd::Constant(es.dimension(), 0.3);
  double total_us = 0.0;
  for (int g = 0; g < gens; ++g) {
    const auto a0 = clock::now();
    const Eigen::MatrixXd candidates = es.ask(rng);
    const auto a1 = clock::now();

    std::vector<SolutionRecord> solutions(static_cast<std::size_t>(lambda));
    std::vector<double> improvements(static_cast<std::size_t>(lambda));
    for (int j = 0; j < lambda; ++j) {
      auto& rec = solutions[static_cast<std::size_t>(j)];
      rec.params = candidates.col(j);
      rec.objective = -(rec.params - target).squaredNorm();
      rec.measures = Eigen::VectorXd::Zero(2);
      improvements[static_cast<std::size_t>(j)] = rec.objective;
    }
    RankedBatch batch = make_ranked_batch(
        std::move(solutions), std::move(improvements),
        std::vector<char>(static_cast<std::size_t>(lambda), 1));

    const auto t0 = clock::now();
    es.tell(batch);
    const auto t1 = clock::now();
    total_us += std::chrono::duration<double, std::micro>(a1 - a0).count() +
                std::chrono::duration<double, std::micro>(t1 - t0).count();
  }
  return total_us;
}

}  // namespace

std::vector<ComplexityRow> bench_complexity_rows(
    const std::vector<int>& dims, const std::vector<std::string>& variants,
    int samples) {
  if (samples < 1) throw std::invalid_argument("samples: must be >= 1");
  constexpr int kLambda = 40;  // benchmark batch size
  std::vector<ComplexityRow> rows;
  for (const std::string& name : variants) {
    const EsVariant variant = es_variant_from_name(name);
    for (int n : dims) {
      if (n < 2) throw std::invalid_argument("dims: must be >= 2");
      auto es = make_es(variant, Eigen::VectorXd::Zero(n), 0.1, kLambda);
      Rng rng(0x9d2c5680u + static_cast<std::uint64_t>(n));
      // Warm up past LmMa's direction ramp-up and at least one full
      // eigendecomposition period, then time whole periods so the amortized
      // decomposition cost is represented.
      const int period =
          variant == EsVariant::kFullCma ? std::max(1, n / kLambda) : 1;
      const int warmup = std::max(kLambda, period);
      time_ask_tell_us(*es, rng, warmup);
      const int gens = std::max(samples, 2 * period);
      double best_us = time_ask_tell_us(*es, rng, gens);
      best_us = std::min(best_us, time_ask_tell_us(*es, rng, gens));
      rows.push_back(ComplexityRow{
          name, n, best_us / (static_cast<double>(gens) * kLambda)});
    }
  }
  return rows;
}

std::string bench_complexity(const std::vector<int>& dims,
                             const std::vector<std::string>& variants,
                             int samples) {
  std::ostringstream out;
  out << "variant,n,us_per_solution\n";
  for (const ComplexityRow& row : bench_complexity_rows(dims, variants,
                                                        samples)) {
    out << row.variant << ',' << row.n << ','
        << csv::format_double(row.us_per_solution) << '\n';
  }
  return out.str();
}

}  // namespace qdmae
