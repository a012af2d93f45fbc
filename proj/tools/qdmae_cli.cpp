#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qdmae/csv.hpp"
#include "qdmae/experiment.hpp"

namespace {

// Override flags are collected as (config key, value) pairs and applied after
// the config file is loaded, so flags always win.
using Overrides = std::vector<std::pair<std::string, std::string>>;

void add_override_flags(CLI::App* cmd, Overrides& overrides) {
  struct Flag {
    const char* names;
    const char* key;
    const char* help;
  };
  static const Flag kFlags[] = {
      {"--domain", "domain", "Domain name (sphere-<n> or arm-<n>)"},
      {"--algorithm", "algorithm",
       "cma-mae, lm-ma-mae, sep-cma-mae, or openai-mae"},
      {"--psi", "psi", "Number of emitters"},
      {"--lambda", "lambda", "Batch size per emitter"},
      {"--iterations", "iterations", "Outer-loop iterations N"},
      {"--sigma0", "sigma0", "Initial step size"},
      {"--alpha", "alpha", "Archive learning rate in [0, 1]"},
      {"--min-f,--min_f", "min_f", "Threshold floor min_f"},
      {"--grid-dims,--grid_dims", "grid_dims", "Archive shape, e.g. 100x100"},
      {"--seeds", "seeds", "Comma-separated seed list, e.g. 1,2,3"},
      {"--output-dir,--output_dir", "output_dir", "Output directory"},
      {"--k", "k", "lm-ma-mae direction count (0 = lambda)"},
      {"--learning-rate,--learning_rate", "learning_rate",
       "openai-mae Adam step size"},
      {"--l2-coeff,--l2_coeff", "l2_coeff",
       "openai-mae L2 regularization coefficient"},
      {"--checkpoint-every,--checkpoint_every", "checkpoint_every",
       "Write archives every N iterations (0 = end of run only)"},
  };
  for (const Flag& flag : kFlags) {
    const std::string key = flag.key;
    cmd->add_option_function<std::string>(
        flag.names,
        [&overrides, key](const std::string& value) {
          overrides.emplace_back(key, value);
        },
        flag.help);
  }
}

qdmae::ExperimentConfig load_with_overrides(const std::string& config_path,
                                            const Overrides& overrides,
                                            int eval_threads, bool quiet) {
  qdmae::ExperimentConfig config = qdmae::load_config(config_path);
  for (const auto& [key, value] : overrides) {
    qdmae::apply_override(config, key, value);
  }
  config.eval_threads = eval_threads;
  config.quiet = quiet;
  return config;
}

std::vector<int> parse_grid_dims(std::string text) {
  for (char& c : text) {
    if (c == 'x') c = ',';
  }
  std::vector<int> dims;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    dims.push_back(std::stoi(item));
  }
  return dims;
}

int read_qd_threads() {
  const char* env = std::getenv("QD_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int threads = std::stoi(env);
    if (threads < 1) throw std::invalid_argument("non-positive");
    return threads;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("QD_THREADS: not a positive "
                                            "integer: '") +
                                env + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quality-diversity optimization benchmarks: annealed MAP-Elites "
      "archives driven by four evolution-strategy backends."};
  app.require_subcommand(1);

  // --- run ---------------------------------------------------------------
  auto* run_cmd =
      app.add_subcommand("run", "Run one experiment (one trial per seed)");
  std::string run_config_path;
  run_cmd->add_option("config", run_config_path, "Config file (key = value)")
      ->required();
  Overrides run_overrides;
  add_override_flags(run_cmd, run_overrides);
  bool run_quiet = false;
  run_cmd->add_flag("--quiet", run_quiet, "Suppress progress output");

  // --- sweep-alpha ---------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand(
      "sweep-alpha", "Run the experiment once per archive learning rate");
  std::string sweep_config_path;
  sweep_cmd
      ->add_option("config", sweep_config_path, "Config file (key = value)")
      ->required();
  std::vector<double> sweep_alphas;
  sweep_cmd->add_option("--alphas", sweep_alphas, "Alpha values in [0, 1]")
      ->required()
      ->delimiter(',');
  Overrides sweep_overrides;
  add_override_flags(sweep_cmd, sweep_overrides);
  bool sweep_quiet = false;
  sweep_cmd->add_flag("--quiet", sweep_quiet, "Suppress progress output");

  // --- bench-complexity ----------------------------------------------------
  auto* bench_cmd = app.add_subcommand(
      "bench-complexity", "Time ask+tell per solution across dimensions");
  std::vector<int> bench_dims;
  bench_cmd->add_option("--dims", bench_dims, "Dimensions, e.g. 512,1024")
      ->required()
      ->delimiter(',');
  std::vector<std::string> bench_variants = {"cma-mae", "lm-ma-mae",
                                             "sep-cma-mae", "openai-mae"};
  bench_cmd
      ->add_option("--variants", bench_variants,
                   "Variant names (default: all four)")
      ->delimiter(',');
  int bench_samples = 30;
  bench_cmd->add_option("--samples", bench_samples,
                        "Timed generations per measurement");
  std::string bench_out = "complexity.csv";
  bench_cmd->add_option("--out", bench_out, "Output CSV path");

  // --- heatmap ---------------------------------------------------------
  auto* heatmap_cmd = app.add_subcommand(
      "heatmap", "Convert a sparse archive CSV into a dense objective grid");
  std::string heatmap_input;
  heatmap_cmd->add_option("archive", heatmap_input, "Archive CSV path")
      ->required();
  std::string heatmap_dims = "100x100";
  heatmap_cmd->add_option("--grid-dims,--grid_dims", heatmap_dims,
                          "Archive shape, e.g. 100x100");
  std::string heatmap_out = "heatmap.csv";
  heatmap_cmd->add_option("--out", heatmap_out, "Output CSV path");

  try {
    app.parse(argc, argv);

    const int eval_threads = read_qd_threads();
    if (run_cmd->parsed()) {
      qdmae::run_experiment(load_with_overrides(run_config_path, run_overrides,
                                                eval_threads, run_quiet));
    } else if (sweep_cmd->parsed()) {
      qdmae::sweep_alpha(load_with_overrides(sweep_config_path,
                                             sweep_overrides, eval_threads,
                                             sweep_quiet),
                         sweep_alphas);
    } else if (bench_cmd->parsed()) {
      const std::string csv =
          qdmae::bench_complexity(bench_dims, bench_variants, bench_samples);
      std::ofstream out(bench_out, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + bench_out);
      out << csv;
      std::cout << csv;
    } else if (heatmap_cmd->parsed()) {
      qdmae::csv::write_heatmap(heatmap_out,
                                qdmae::csv::read_archive_cells(heatmap_input),
                                parse_grid_dims(heatmap_dims));
      std::cout << "wrote " << heatmap_out << std::endl;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
