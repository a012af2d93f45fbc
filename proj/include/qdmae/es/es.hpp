#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qdmae/rng.hpp"
#include "qdmae/solution.hpp"

namespace qdmae {

/// One evaluated batch plus its improvement ranking.
///
/// `ranking` is a permutation of 0..lambda-1; ranking[0] is the batch index of
/// the solution with the highest improvement value Delta. `improvements` and
/// `accepted` carry the per-solution archive feedback: the distribution update
/// in tell() reads only `ranking` and the solution vectors (so any strictly
/// monotone transform of the Delta values leaves the update bit-identical),
/// while the restart logic reads only `accepted`.
struct RankedBatch {
  std::vector<SolutionRecord> solutions;
  std::vector<int> ranking;
  std::vector<double> improvements;
  std::vector<char> accepted;
};

/// Ranking permutation by improvement descending; ties broken by objective
/// descending, then by batch index (stable, reproducible runs).
std::vector<int> rank_by_improvement(const std::vector<double>& improvements,
                                     const std::vector<double>& objectives);

/// Build a RankedBatch from per-solution feedback (computes the ranking).
RankedBatch make_ranked_batch(std::vector<SolutionRecord> solutions,
                              std::vector<double> improvements,
                              std::vector<char> accepted);

struct EsOptions {
  int k = 0;                   // LmMa: number of direction vectors; 0 => lambda
  double learning_rate = 0.01; // OpenAi: Adam step size
  double l2_coeff = 0.0;       // OpenAi: L2 regularization coefficient
};

/// Ask/tell evolution strategy behind one contract: sample lambda solutions
/// from a (possibly approximate) Gaussian, then adapt the distribution from an
/// improvement ranking.
///
/// Lifecycle per generation: ask -> evaluate/insert -> tell -> needs_restart.
/// Objects are copyable; a copy carries the full state (including any cached
/// per-generation draws), so replaying tell() on copies is bit-exact.
class EvolutionStrategy {
 public:
  /// Restart patience: generations with no archive improvement before
  /// needs_restart() fires.
  static constexpr int kNoImprovePatience = 50;
  /// Restart threshold on the step size.
  static constexpr double kMinStepSize = 1e-12;
  /// Restart threshold on the covariance condition number (FullCma).
  static constexpr double kMaxCondition = 1e14;
  /// Numerical floor for eigenvalues / diagonal variances before sqrt.
  static constexpr double kVarianceFloor = 1e-20;

  EvolutionStrategy(Eigen::VectorXd mean, double sigma0, int lambda);
  virtual ~EvolutionStrategy() = default;

  /// Sample lambda candidates as columns of an n x lambda matrix. Advances
  /// `rng` and any per-generation sample cache; distribution parameters are
  /// not mutated. Throws when the state holds non-finite parameters.
  virtual Eigen::MatrixXd ask(Rng& rng) = 0;

  /// Adapt mean/covariance/internal parameters from the improvement ranking
  /// of the batch produced by the matching ask(). Also advances the
  /// no-improvement counter from batch.accepted.
  virtual void tell(const RankedBatch& batch) = 0;

  /// True when the variant's convergence criteria fire: (a) no archive
  /// improvement for kNoImprovePatience consecutive generations, (b) step
  /// size below kMinStepSize, (c) covariance condition number above
  /// kMaxCondition (FullCma only), (d) any non-finite parameter.
  /// Pure predicate; no mutation.
  virtual bool needs_restart() const;

  /// Re-initialize all adaptation state as at construction, with
  /// mean = new_mean and an isotropic sigma0-scaled distribution.
  virtual void reset(const Eigen::VectorXd& new_mean, double sigma0);

  /// Number of stored reals (memory-complexity accounting).
  virtual std::size_t stored_reals() const = 0;

  virtual std::string name() const = 0;

  const Eigen::VectorXd& mean() const { return mean_; }
  double step_size() const { return sigma_; }
  int dimension() const { return static_cast<int>(mean_.size()); }
  int batch_size() const { return lambda_; }
  long long generation() const { return generation_; }
  int no_improve_generations() const { return no_improve_; }

 protected:
  void check_batch(const RankedBatch& batch) const;
  void bump_no_improve(const RankedBatch& batch);
  void throw_if_non_finite(const char* param, const Eigen::VectorXd& v) const;

  Eigen::VectorXd mean_;
  double sigma_;
  int lambda_;
  long long generation_ = 0;
  int no_improve_ = 0;
};

enum class EsVariant { kFullCma, kLmMa, kSepCma, kOpenAi };

/// Parse an ES variant from its algorithm name:
/// cma-mae, lm-ma-mae, sep-cma-mae, openai-mae. Throws on unknown names.
EsVariant es_variant_from_name(const std::string& name);
std::string es_variant_name(EsVariant v);

std::unique_ptr<EvolutionStrategy> make_es(EsVariant variant,
                                           const Eigen::VectorXd& mean0,
                                           double sigma0, int lambda,
                                           const EsOptions& opts = {});

/// Log-linear recombination weights over the top floor(lambda/2) ranks,
/// normalized to sum 1: w_i proportional to ln(mu + 1/2) - ln(i).
Eigen::VectorXd recombination_weights(int lambda);

}  // namespace qdmae
