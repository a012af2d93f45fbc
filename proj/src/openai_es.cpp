#include "qdmae/es/openai_es.hpp"

#include <cmath>
#include <stdexcept>

namespace qdmae {

OpenAi::OpenAi(const Eigen::VectorXd& mean0, double sigma0, int lambda,
               double learning_rate, double l2_coeff)
    : EvolutionStrategy(mean0, sigma0, lambda),
      learning_rate_(learning_rate),
      l2_coeff_(l2_coeff) {
  if (!(learning_rate_ > 0.0)) {
    throw std::invalid_argument("OpenAi: learning_rate must be > 0");
  }
  if (l2_coeff_ < 0.0) {
    throw std::invalid_argument("OpenAi: l2_coeff must be >= 0");
  }
  adam_m_ = Eigen::VectorXd::Zero(dimension());
  adam_v_ = Eigen::VectorXd::Zero(dimension());
}

Eigen::MatrixXd OpenAi::ask(Rng& rng) {
  throw_if_non_finite("mean", mean_);
  if (!std::isfinite(sigma_)) {
    throw std::runtime_error("ask: non-finite parameter: sigma");
  }
  Eigen::MatrixXd x(dimension(), lambda_);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      x(i, j) = mean_[i] + sigma_ * rng.normal();
    }
  }
  return x;
}

void OpenAi::tell(const RankedBatch& batch) {
  check_batch(batch);

  // Centered ranks in [-0.5, 0.5]: best improvement -> +0.5, worst -> -0.5.
  // Pseudo-gradient of the expected (rank-shaped) objective:
  //   g = 1/(lambda sigma) * sum_i u_i eps_i,  x_i = mean + sigma eps_i.
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dimension());
  const double denom = static_cast<double>(lambda_ - 1);
  for (int r = 0; r < lambda_; ++r) {
    const auto& s = batch.solutions[static_cast<std::size_t>(batch.ranking[r])];
    if (!s.params.allFinite()) {
      throw std::invalid_argument("tell: non-finite solution parameters");
    }
    const double u = 0.5 - static_cast<double>(r) / denom;
    g += u * (s.params - mean_);
  }
  g /= static_cast<double>(lambda_) * sigma_ * sigma_;

  // L2 regularization (weight decay on the mean), then Adam ascent.
  g -= l2_coeff_ * mean_;
  ++adam_step_;
  adam_m_ = kBeta1 * adam_m_ + (1.0 - kBeta1) * g;
  adam_v_ = kBeta2 * adam_v_ + (1.0 - kBeta2) * g.cwiseAbs2();
  const double t = static_cast<double>(adam_step_);
  const Eigen::VectorXd m_hat = adam_m_ / (1.0 - std::pow(kBeta1, t));
  const Eigen::VectorXd v_hat = adam_v_ / (1.0 - std::pow(kBeta2, t));
  const Eigen::VectorXd denom_v =
      v_hat.cwiseSqrt() + Eigen::VectorXd::Constant(dimension(), kEpsilon);
  mean_ += learning_rate_ * m_hat.cwiseQuotient(denom_v);

  bump_no_improve(batch);
  ++generation_;
}

bool OpenAi::needs_restart() const {
  if (generation_ == 0) return false;
  if (EvolutionStrategy::needs_restart()) return true;
  return !adam_m_.allFinite() || !adam_v_.allFinite();
}

void OpenAi::reset(const Eigen::VectorXd& new_mean, double sigma0) {
  EvolutionStrategy::reset(new_mean, sigma0);
  adam_m_.setZero();
  adam_v_.setZero();
  adam_step_ = 0;
}

std::size_t OpenAi::stored_reals() const {
  return static_cast<std::size_t>(mean_.size() + adam_m_.size() +
                                  adam_v_.size());
}

}  // namespace qdmae
