#include "qdmae/es/sep_cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdmae {

SepCma::SepCma(const Eigen::VectorXd& mean0, double sigma0, int lambda)
    : EvolutionStrategy(mean0, sigma0, lambda) {
  const double n = static_cast<double>(dimension());
  weights_ = recombination_weights(lambda);
  mu_eff_ = 1.0 / weights_.squaredNorm();
  c_sigma_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 3.0);
  d_sigma_ = 1.0 +
             2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = 4.0 / (n + 4.0);
  // Default c_cov scaled by (n+2)/3 for diagonal-only adaptation.
  const double sqrt2 = std::sqrt(2.0);
  const double c_cov_full =
      (1.0 / mu_eff_) * 2.0 / ((n + sqrt2) * (n + sqrt2)) +
      (1.0 - 1.0 / mu_eff_) *
          std::min(1.0, (2.0 * mu_eff_ - 1.0) / ((n + 2.0) * (n + 2.0) + mu_eff_));
  c_cov_ = std::min(1.0, (n + 2.0) / 3.0 * c_cov_full);
  chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  diag_var_ = Eigen::VectorXd::Ones(dimension());
  path_sigma_ = Eigen::VectorXd::Zero(dimension());
  path_cov_ = Eigen::VectorXd::Zero(dimension());
}

void SepCma::set_diag_variance(const Eigen::VectorXd& v) {
  if (v.size() != mean_.size()) {
    throw std::invalid_argument("set_diag_variance: dimension mismatch");
  }
  if (!v.allFinite() || v.minCoeff() <= 0.0) {
    throw std::invalid_argument("set_diag_variance: entries must be > 0");
  }
  diag_var_ = v;
}

Eigen::MatrixXd SepCma::ask(Rng& rng) {
  throw_if_non_finite("mean", mean_);
  throw_if_non_finite("diag_variance", diag_var_);
  throw_if_non_finite("evo_path_sigma", path_sigma_);
  throw_if_non_finite("evo_path_cov", path_cov_);
  if (!std::isfinite(sigma_)) {
    throw std::runtime_error("ask: non-finite parameter: step_size");
  }
  const Eigen::VectorXd scale = sigma_ * diag_var_.cwiseSqrt();
  Eigen::MatrixXd x(dimension(), lambda_);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      x(i, j) = mean_[i] + scale[i] * rng.normal();
    }
  }
  return x;
}

void SepCma::tell(const RankedBatch& batch) {
  check_batch(batch);
  const int mu = static_cast<int>(weights_.size());
  const double n = static_cast<double>(dimension());

  Eigen::MatrixXd y_sel(dimension(), mu);
  for (int r = 0; r < mu; ++r) {
    const auto& s = batch.solutions[static_cast<std::size_t>(batch.ranking[r])];
    if (!s.params.allFinite()) {
      throw std::invalid_argument("tell: non-finite solution parameters");
    }
    y_sel.col(r) = (s.params - mean_) / sigma_;
  }
  const Eigen::VectorXd y_w = y_sel * weights_;

  mean_ += sigma_ * y_w;

  // CSA path; C^(-1/2) is diagonal here.
  const Eigen::VectorXd d_inv = diag_var_.cwiseSqrt().cwiseInverse();
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) *
                    d_inv.cwiseProduct(y_w);

  const double decay =
      1.0 - std::pow(1.0 - c_sigma_, 2.0 * static_cast<double>(generation_ + 1));
  const bool h_sigma = path_sigma_.norm() / std::sqrt(decay) <
                       (1.4 + 2.0 / (n + 1.0)) * chi_n_;

  path_cov_ = (1.0 - c_c_) * path_cov_;
  if (h_sigma) {
    path_cov_ += std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * y_w;
  }

  // Diagonal rank-one + rank-mu update.
  const double delta_h = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);
  Eigen::VectorXd rank_mu = Eigen::VectorXd::Zero(dimension());
  for (int r = 0; r < mu; ++r) {
    rank_mu += weights_[r] * y_sel.col(r).cwiseAbs2();
  }
  diag_var_ = (1.0 - c_cov_) * diag_var_ +
              (c_cov_ / mu_eff_) *
                  (path_cov_.cwiseAbs2() + delta_h * diag_var_) +
              c_cov_ * (1.0 - 1.0 / mu_eff_) * rank_mu;
  diag_var_ = diag_var_.cwiseMax(kVarianceFloor);

  sigma_ *= std::exp(c_sigma_ / d_sigma_ * (path_sigma_.norm() / chi_n_ - 1.0));

  bump_no_improve(batch);
  ++generation_;
}

bool SepCma::needs_restart() const {
  if (generation_ == 0) return false;
  if (EvolutionStrategy::needs_restart()) return true;
  return !diag_var_.allFinite() || !path_cov_.allFinite();
}

void SepCma::reset(const Eigen::VectorXd& new_mean, double sigma0) {
  EvolutionStrategy::reset(new_mean, sigma0);
  diag_var_.setOnes();
  path_sigma_.setZero();
  path_cov_.setZero();
}

std::size_t SepCma::stored_reals() const {
  return static_cast<std::size_t>(diag_var_.size() + mean_.size() +
                                  path_sigma_.size() + path_cov_.size() +
                                  weights_.size());
}

}  // namespace qdmae
