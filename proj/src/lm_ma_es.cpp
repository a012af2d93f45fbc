#include "qdmae/es/lm_ma_es.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdmae {

LmMa::LmMa(const Eigen::VectorXd& mean0, double sigma0, int lambda, int k)
    : EvolutionStrategy(mean0, sigma0, lambda), k_(k) {
  if (k_ < 1) throw std::invalid_argument("LmMa: k must be >= 1");
  const double n = static_cast<double>(dimension());
  weights_ = recombination_weights(lambda);
  mu_eff_ = 1.0 / weights_.squaredNorm();
  // Published constant targets n >> lambda; clamp keeps (1 - c_sigma) and
  // c_sigma (2 - c_sigma) non-negative when lambda approaches n.
  c_sigma_ = std::min(1.0, 2.0 * lambda / n);
  c_d_.resize(k_);
  c_c_.resize(k_);
  for (int i = 0; i < k_; ++i) {
    c_d_[i] = 1.0 / (std::pow(1.5, i) * n);
    c_c_[i] = std::min(1.0, lambda / (std::pow(4.0, i) * n));
  }
  dirs_ = Eigen::MatrixXd::Zero(k_, dimension());
  path_sigma_ = Eigen::VectorXd::Zero(dimension());
}

Eigen::MatrixXd LmMa::ask(Rng& rng) {
  throw_if_non_finite("mean", mean_);
  throw_if_non_finite("evo_path_sigma", path_sigma_);
  if (!dirs_.allFinite()) {
    throw std::runtime_error("ask: non-finite parameter: direction_vectors");
  }
  if (!std::isfinite(sigma_)) {
    throw std::runtime_error("ask: non-finite parameter: step_size");
  }
  z_cache_.resize(dimension(), lambda_);
  for (Eigen::Index j = 0; j < z_cache_.cols(); ++j) {
    for (Eigen::Index i = 0; i < z_cache_.rows(); ++i) {
      z_cache_(i, j) = rng.normal();
    }
  }
  // d <- z, then d <- (1 - c_d,j) d + c_d,j m_j (m_j . d) for the first
  // min(generation, k) direction vectors.
  Eigen::MatrixXd d = z_cache_;
  const int active =
      static_cast<int>(std::min<long long>(generation_, k_));
  for (int j = 0; j < active; ++j) {
    const Eigen::RowVectorXd dir = dirs_.row(j);
    const Eigen::RowVectorXd proj = dir * d;  // 1 x lambda
    d = (1.0 - c_d_[j]) * d + (c_d_[j] * dir.transpose()) * proj;
  }
  return (sigma_ * d).colwise() + mean_;
}

void LmMa::tell(const RankedBatch& batch) {
  check_batch(batch);
  if (z_cache_.cols() != lambda_) {
    throw std::logic_error("tell: no matching ask sample cache");
  }
  const int mu = static_cast<int>(weights_.size());

  // Weighted recombination of transformed steps (from the solutions) and of
  // raw normal draws (from the cache), best improvement first.
  Eigen::VectorXd d_w = Eigen::VectorXd::Zero(dimension());
  Eigen::VectorXd z_w = Eigen::VectorXd::Zero(dimension());
  for (int r = 0; r < mu; ++r) {
    const int idx = batch.ranking[r];
    const auto& s = batch.solutions[static_cast<std::size_t>(idx)];
    if (!s.params.allFinite()) {
      throw std::invalid_argument("tell: non-finite solution parameters");
    }
    d_w += weights_[r] * (s.params - mean_);
    z_w += weights_[r] * z_cache_.col(idx);
  }
  d_w /= sigma_;

  mean_ += sigma_ * d_w;
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(mu_eff_ * c_sigma_ * (2.0 - c_sigma_)) * z_w;
  for (int j = 0; j < k_; ++j) {
    dirs_.row(j) = (1.0 - c_c_[j]) * dirs_.row(j) +
                   std::sqrt(mu_eff_ * c_c_[j] * (2.0 - c_c_[j])) *
                       z_w.transpose();
  }
  sigma_ *= std::exp(c_sigma_ / 2.0 *
                     (path_sigma_.squaredNorm() / dimension() - 1.0));

  bump_no_improve(batch);
  ++generation_;
}

bool LmMa::needs_restart() const {
  if (generation_ == 0) return false;
  if (EvolutionStrategy::needs_restart()) return true;
  return !dirs_.allFinite() || !path_sigma_.allFinite();
}

void LmMa::reset(const Eigen::VectorXd& new_mean, double sigma0) {
  EvolutionStrategy::reset(new_mean, sigma0);
  dirs_.setZero();
  path_sigma_.setZero();
  z_cache_.resize(0, 0);
}

std::size_t LmMa::stored_reals() const {
  return static_cast<std::size_t>(dirs_.size() + mean_.size() +
                                  path_sigma_.size() + weights_.size() +
                                  c_d_.size() + c_c_.size() + z_cache_.size());
}

}  // namespace qdmae
