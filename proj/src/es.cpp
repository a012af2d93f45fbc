#include "qdmae/es/es.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qdmae/es/cma_es.hpp"
#include "qdmae/es/lm_ma_es.hpp"
#include "qdmae/es/openai_es.hpp"
#include "qdmae/es/sep_cma_es.hpp"

namespace qdmae {

std::vector<int> rank_by_improvement(const std::vector<double>& improvements,
                                     const std::vector<double>& objectives) {
  if (improvements.size() != objectives.size()) {
    throw std::invalid_argument("rank_by_improvement: size mismatch");
  }
  std::vector<int> order(improvements.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (improvements[a] != improvements[b]) {
      return improvements[a] > improvements[b];
    }
    return objectives[a] > objectives[b];
  });
  return order;
}

RankedBatch make_ranked_batch(std::vector<SolutionRecord> solutions,
                              std::vector<double> improvements,
                              std::vector<char> accepted) {
  std::vector<double> objectives(solutions.size());
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    objectives[i] = solutions[i].objective;
  }
  RankedBatch batch;
  batch.ranking = rank_by_improvement(improvements, objectives);
  batch.solutions = std::move(solutions);
  batch.improvements = std::move(improvements);
  batch.accepted = std::move(accepted);
  return batch;
}

EvolutionStrategy::EvolutionStrategy(Eigen::VectorXd mean, double sigma0,
                                     int lambda)
    : mean_(std::move(mean)), sigma_(sigma0), lambda_(lambda) {
  if (lambda_ < 2) throw std::invalid_argument("es: lambda must be >= 2");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("es: sigma0 must be > 0");
  if (mean_.size() < 1) throw std::invalid_argument("es: empty mean");
  if (!mean_.allFinite()) throw std::invalid_argument("es: non-finite mean");
}

bool EvolutionStrategy::needs_restart() const {
  if (generation_ == 0) return false;
  if (no_improve_ >= kNoImprovePatience) return true;
  if (!(sigma_ >= kMinStepSize)) return true;  // also catches NaN sigma
  if (!std::isfinite(sigma_)) return true;
  if (!mean_.allFinite()) return true;
  return false;
}

void EvolutionStrategy::reset(const Eigen::VectorXd& new_mean, double sigma0) {
  if (new_mean.size() != mean_.size()) {
    throw std::invalid_argument("reset: dimension mismatch");
  }
  if (!(sigma0 > 0.0)) throw std::invalid_argument("reset: sigma0 must be > 0");
  mean_ = new_mean;
  sigma_ = sigma0;
  generation_ = 0;
  no_improve_ = 0;
}

void EvolutionStrategy::check_batch(const RankedBatch& batch) const {
  const auto lambda = static_cast<std::size_t>(lambda_);
  if (batch.solutions.size() != lambda || batch.ranking.size() != lambda ||
      batch.accepted.size() != lambda) {
    throw std::invalid_argument("tell: batch size mismatch with lambda");
  }
  std::vector<char> seen(lambda, 0);
  for (int idx : batch.ranking) {
    if (idx < 0 || idx >= lambda_ || seen[static_cast<std::size_t>(idx)]) {
      throw std::invalid_argument("tell: ranking is not a permutation");
    }
    seen[static_cast<std::size_t>(idx)] = 1;
  }
  for (const auto& s : batch.solutions) {
    if (s.params.size() != mean_.size()) {
      throw std::invalid_argument("tell: solution dimension mismatch");
    }
  }
}

void EvolutionStrategy::bump_no_improve(const RankedBatch& batch) {
  const bool any_accepted =
      std::any_of(batch.accepted.begin(), batch.accepted.end(),
                  [](char a) { return a != 0; });
  no_improve_ = any_accepted ? 0 : no_improve_ + 1;
}

void EvolutionStrategy::throw_if_non_finite(const char* param,
                                            const Eigen::VectorXd& v) const {
  if (!v.allFinite()) {
    throw std::runtime_error(std::string("ask: non-finite parameter: ") +
                             param);
  }
}

EsVariant es_variant_from_name(const std::string& name) {
  if (name == "cma-mae") return EsVariant::kFullCma;
  if (name == "lm-ma-mae") return EsVariant::kLmMa;
  if (name == "sep-cma-mae") return EsVariant::kSepCma;
  if (name == "openai-mae") return EsVariant::kOpenAi;
  throw std::invalid_argument("algorithm: unknown name '" + name +
                              "' (expected one of cma-mae, lm-ma-mae, "
                              "sep-cma-mae, openai-mae)");
}

std::string es_variant_name(EsVariant v) {
  switch (v) {
    case EsVariant::kFullCma: return "cma-mae";
    case EsVariant::kLmMa: return "lm-ma-mae";
    case EsVariant::kSepCma: return "sep-cma-mae";
    case EsVariant::kOpenAi: return "openai-mae";
  }
  return "?";
}

std::unique_ptr<EvolutionStrategy> make_es(EsVariant variant,
                                           const Eigen::VectorXd& mean0,
                                           double sigma0, int lambda,
                                           const EsOptions& opts) {
  switch (variant) {
    case EsVariant::kFullCma:
      return std::make_unique<FullCma>(mean0, sigma0, lambda);
    case EsVariant::kLmMa:
      return std::make_unique<LmMa>(mean0, sigma0, lambda,
                                    opts.k > 0 ? opts.k : lambda);
    case EsVariant::kSepCma:
      return std::make_unique<SepCma>(mean0, sigma0, lambda);
    case EsVariant::kOpenAi:
      return std::make_unique<OpenAi>(mean0, sigma0, lambda,
                                      opts.learning_rate, opts.l2_coeff);
  }
  throw std::invalid_argument("make_es: unknown variant");
}

Eigen::VectorXd recombination_weights(int lambda) {
  const int mu = lambda / 2;
  Eigen::VectorXd w(mu);
  for (int i = 0; i < mu; ++i) {
    w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  }
  w /= w.sum();
  return w;
}

}  // namespace qdmae
