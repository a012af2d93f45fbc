#pragma once

#include <Eigen/Core>

#include "qdmae/es/es.hpp"

namespace qdmae {

/// Limited-Memory Matrix Adaptation ES: approximates the transformation
/// matrix Sigma^(1/2) with k direction vectors, each owning a geometric
/// learning-rate schedule c_d,i = 1/(1.5^(i-1) n) and decay schedule
/// c_c,i = lambda/(4^(i-1) n). Theta(k n) time per sampled solution.
class LmMa : public EvolutionStrategy {
 public:
  LmMa(const Eigen::VectorXd& mean0, double sigma0, int lambda, int k);

  Eigen::MatrixXd ask(Rng& rng) override;
  void tell(const RankedBatch& batch) override;
  bool needs_restart() const override;
  void reset(const Eigen::VectorXd& new_mean, double sigma0) override;
  std::size_t stored_reals() const override;
  std::string name() const override { return "LmMa"; }

  int direction_count() const { return k_; }
  /// Direction vectors as rows of a k x n matrix.
  const Eigen::MatrixXd& direction_vectors() const { return dirs_; }
  const Eigen::VectorXd& evo_path_sigma() const { return path_sigma_; }

 private:
  int k_;
  Eigen::VectorXd weights_;
  double mu_eff_ = 0.0;
  double c_sigma_ = 0.0;
  Eigen::VectorXd c_d_;  // per-direction transform rates
  Eigen::VectorXd c_c_;  // per-direction decay rates

  Eigen::MatrixXd dirs_;  // k x n
  Eigen::VectorXd path_sigma_;

  // Standard-normal draws of the latest ask (columns); tell() needs the raw
  // z vectors of selected solutions and recovering them by inverting the k
  // rank-one transforms would be slower and less stable.
  Eigen::MatrixXd z_cache_;
};

}  // namespace qdmae
