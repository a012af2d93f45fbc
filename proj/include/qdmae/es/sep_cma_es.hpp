#pragma once

#include <Eigen/Core>

#include "qdmae/es/es.hpp"

namespace qdmae {

/// Separable CMA-ES: the covariance matrix is constrained to be diagonal,
/// adapted with the diagonal-only c_cov correction factor (n+2)/3, yielding
/// Theta(n) time and space per sampled solution.
class SepCma : public EvolutionStrategy {
 public:
  SepCma(const Eigen::VectorXd& mean0, double sigma0, int lambda);

  Eigen::MatrixXd ask(Rng& rng) override;
  void tell(const RankedBatch& batch) override;
  bool needs_restart() const override;
  void reset(const Eigen::VectorXd& new_mean, double sigma0) override;
  std::size_t stored_reals() const override;
  std::string name() const override { return "SepCma"; }

  const Eigen::VectorXd& diag_variance() const { return diag_var_; }
  const Eigen::VectorXd& evo_path_sigma() const { return path_sigma_; }
  const Eigen::VectorXd& evo_path_cov() const { return path_cov_; }

  /// Replace the diagonal covariance entries (test/initialization hook).
  void set_diag_variance(const Eigen::VectorXd& v);

 private:
  Eigen::VectorXd weights_;
  double mu_eff_ = 0.0;
  double c_sigma_ = 0.0, d_sigma_ = 0.0;
  double c_c_ = 0.0, c_cov_ = 0.0;
  double chi_n_ = 0.0;

  Eigen::VectorXd diag_var_;  // strictly positive entries
  Eigen::VectorXd path_sigma_;
  Eigen::VectorXd path_cov_;
};

}  // namespace qdmae
