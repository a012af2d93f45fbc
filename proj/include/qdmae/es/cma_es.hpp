#pragma once

#include <Eigen/Core>

#include "qdmae/es/es.hpp"

namespace qdmae {

/// Full-covariance CMA-ES: rank-mu + rank-one covariance update with
/// log-linear positive recombination weights over the top floor(lambda/2),
/// cumulative step-size adaptation, and the Sigma^(1/2) eigendecomposition
/// amortized over max(1, floor(n/lambda)) generations.
class FullCma : public EvolutionStrategy {
 public:
  FullCma(const Eigen::VectorXd& mean0, double sigma0, int lambda);

  Eigen::MatrixXd ask(Rng& rng) override;
  void tell(const RankedBatch& batch) override;
  bool needs_restart() const override;
  void reset(const Eigen::VectorXd& new_mean, double sigma0) override;
  std::size_t stored_reals() const override;
  std::string name() const override { return "FullCma"; }

  const Eigen::MatrixXd& covariance() const { return cov_; }
  /// Cached sampling transform Sigma^(1/2) = B diag(sqrt(eig)) B^T
  /// (without the sigma factor).
  Eigen::MatrixXd transform_cache() const;
  double condition_number() const { return cond_; }
  const Eigen::VectorXd& evo_path_sigma() const { return path_sigma_; }
  const Eigen::VectorXd& evo_path_cov() const { return path_cov_; }

  /// Replace the covariance matrix (test/initialization hook); triggers an
  /// immediate eigendecomposition.
  void set_covariance(const Eigen::MatrixXd& cov);

 private:
  void decompose();

  // Strategy constants (depend only on n and lambda).
  Eigen::VectorXd weights_;
  double mu_eff_ = 0.0;
  double c_sigma_ = 0.0, d_sigma_ = 0.0;
  double c_c_ = 0.0, c_1_ = 0.0, c_mu_ = 0.0;
  double chi_n_ = 0.0;  // E||N(0, I)||
  int decomp_period_ = 1;

  // Adapted state.
  Eigen::MatrixXd cov_;
  Eigen::VectorXd path_sigma_;
  Eigen::VectorXd path_cov_;

  // Eigendecomposition cache: cov_ = eigvecs * diag(eigvals) * eigvecs^T.
  Eigen::MatrixXd eigvecs_;
  Eigen::VectorXd sqrt_eigvals_;
  double cond_ = 1.0;
  bool decomp_valid_ = true;
  long long gens_since_decomp_ = 0;
};

}  // namespace qdmae
