#include "qdmae/es/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qdmae {

FullCma::FullCma(const Eigen::VectorXd& mean0, double sigma0, int lambda)
    : EvolutionStrategy(mean0, sigma0, lambda) {
  const double n = static_cast<double>(dimension());
  weights_ = recombination_weights(lambda);
  mu_eff_ = 1.0 / weights_.squaredNorm();
  c_sigma_ = (mu_eff_ + 2.0) / (n + mu_eff_ + 5.0);
  d_sigma_ = 1.0 +
             2.0 * std::max(0.0, std::sqrt((mu_eff_ - 1.0) / (n + 1.0)) - 1.0) +
             c_sigma_;
  c_c_ = (4.0 + mu_eff_ / n) / (n + 4.0 + 2.0 * mu_eff_ / n);
  c_1_ = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff_);
  c_mu_ = std::min(1.0 - c_1_, 2.0 * (mu_eff_ - 2.0 + 1.0 / mu_eff_) /
                                   ((n + 2.0) * (n + 2.0) + mu_eff_));
  chi_n_ = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
  decomp_period_ = std::max(1, dimension() / lambda);

  cov_ = Eigen::MatrixXd::Identity(dimension(), dimension());
  path_sigma_ = Eigen::VectorXd::Zero(dimension());
  path_cov_ = Eigen::VectorXd::Zero(dimension());
  decompose();
}

void FullCma::decompose() {
  cov_ = 0.5 * (cov_ + cov_.transpose()).eval();  // enforce symmetry
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov_);
  decomp_valid_ = eig.info() == Eigen::Success && eig.eigenvalues().allFinite();
  if (!decomp_valid_) {
    cond_ = std::numeric_limits<double>::infinity();
    gens_since_decomp_ = 0;
    return;
  }
  Eigen::VectorXd vals =
      eig.eigenvalues().cwiseMax(kVarianceFloor);  // numerical floor
  eigvecs_ = eig.eigenvectors();
  sqrt_eigvals_ = vals.cwiseSqrt();
  cond_ = vals.maxCoeff() / vals.minCoeff();
  gens_since_decomp_ = 0;
}

Eigen::MatrixXd FullCma::transform_cache() const {
  return eigvecs_ * sqrt_eigvals_.asDiagonal() * eigvecs_.transpose();
}

void FullCma::set_covariance(const Eigen::MatrixXd& cov) {
  if (cov.rows() != dimension() || cov.cols() != dimension()) {
    throw std::invalid_argument("set_covariance: dimension mismatch");
  }
  cov_ = cov;
  decompose();
}

Eigen::MatrixXd FullCma::ask(Rng& rng) {
  throw_if_non_finite("mean", mean_);
  throw_if_non_finite("evo_path_sigma", path_sigma_);
  throw_if_non_finite("evo_path_cov", path_cov_);
  if (!std::isfinite(sigma_)) {
    throw std::runtime_error("ask: non-finite parameter: step_size");
  }
  if (!decomp_valid_) {
    throw std::runtime_error("ask: non-finite parameter: covariance");
  }
  Eigen::MatrixXd z(dimension(), lambda_);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
  }
  // x = m + sigma * B * diag(sqrt(eig)) * B^T * z  (Sigma^(1/2) transform).
  Eigen::MatrixXd y =
      eigvecs_ * (sqrt_eigvals_.asDiagonal() * (eigvecs_.transpose() * z));
  return (sigma_ * y).colwise() + mean_;
}

void FullCma::tell(const RankedBatch& batch) {
  check_batch(batch);
  const int mu = static_cast<int>(weights_.size());
  const double n = static_cast<double>(dimension());

  // Selected steps y_i = (x_i - m_old) / sigma, best improvement first.
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

  // CSA path (needs C^(-1/2) y_w = B diag(1/sqrt(eig)) B^T y_w).
  const Eigen::VectorXd c_inv_sqrt_yw =
      eigvecs_ * (sqrt_eigvals_.cwiseInverse().asDiagonal() *
                  (eigvecs_.transpose() * y_w));
  path_sigma_ = (1.0 - c_sigma_) * path_sigma_ +
                std::sqrt(c_sigma_ * (2.0 - c_sigma_) * mu_eff_) * c_inv_sqrt_yw;

  const double decay =
      1.0 - std::pow(1.0 - c_sigma_, 2.0 * static_cast<double>(generation_ + 1));
  const bool h_sigma = path_sigma_.norm() / std::sqrt(decay) <
                       (1.4 + 2.0 / (n + 1.0)) * chi_n_;

  path_cov_ = (1.0 - c_c_) * path_cov_;
  if (h_sigma) {
    path_cov_ += std::sqrt(c_c_ * (2.0 - c_c_) * mu_eff_) * y_w;
  }

  // Rank-one + rank-mu covariance update.
  const double delta_h = h_sigma ? 0.0 : c_c_ * (2.0 - c_c_);
  cov_ *= 1.0 - c_1_ - c_mu_ + c_1_ * delta_h;
  cov_ += c_1_ * path_cov_ * path_cov_.transpose();
  for (int r = 0; r < mu; ++r) {
    cov_ += c_mu_ * weights_[r] * y_sel.col(r) * y_sel.col(r).transpose();
  }

  sigma_ *= std::exp(c_sigma_ / d_sigma_ * (path_sigma_.norm() / chi_n_ - 1.0));

  bump_no_improve(batch);
  ++generation_;
  if (++gens_since_decomp_ >= decomp_period_) decompose();
}

bool FullCma::needs_restart() const {
  if (generation_ == 0) return false;
  if (EvolutionStrategy::needs_restart()) return true;
  if (!decomp_valid_ || cond_ > kMaxCondition) return true;
  if (!path_cov_.allFinite()) return true;
  return false;
}

void FullCma::reset(const Eigen::VectorXd& new_mean, double sigma0) {
  EvolutionStrategy::reset(new_mean, sigma0);
  cov_ = Eigen::MatrixXd::Identity(dimension(), dimension());
  path_sigma_.setZero();
  path_cov_.setZero();
  decompose();
}

std::size_t FullCma::stored_reals() const {
  return static_cast<std::size_t>(cov_.size() + eigvecs_.size() +
                                  sqrt_eigvals_.size() + mean_.size() +
                                  path_sigma_.size() + path_cov_.size() +
                                  weights_.size());
}

}  // namespace qdmae
