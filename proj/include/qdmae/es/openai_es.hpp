#pragma once

#include <Eigen/Core>

#include "qdmae/es/es.hpp"

namespace qdmae {

/// OpenAI-style ES: isotropic Gaussian with constant sigma. The mean is the
/// only adapted parameter — tell() shapes centered ranks in [-0.5, 0.5] into
/// a pseudo-gradient, applies L2 regularization, and steps with Adam.
/// Mirrored sampling is intentionally off. Theta(n) per sampled solution.
class OpenAi : public EvolutionStrategy {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  OpenAi(const Eigen::VectorXd& mean0, double sigma0, int lambda,
         double learning_rate, double l2_coeff);

  Eigen::MatrixXd ask(Rng& rng) override;
  void tell(const RankedBatch& batch) override;
  bool needs_restart() const override;
  void reset(const Eigen::VectorXd& new_mean, double sigma0) override;
  std::size_t stored_reals() const override;
  std::string name() const override { return "OpenAi"; }

  double sigma() const { return sigma_; }
  double learning_rate() const { return learning_rate_; }
  double l2_coeff() const { return l2_coeff_; }
  const Eigen::VectorXd& adam_first_moment() const { return adam_m_; }
  const Eigen::VectorXd& adam_second_moment() const { return adam_v_; }
  long long adam_step() const { return adam_step_; }

 private:
  double learning_rate_;
  double l2_coeff_;
  Eigen::VectorXd adam_m_;
  Eigen::VectorXd adam_v_;
  long long adam_step_ = 0;
};

}  // namespace qdmae
