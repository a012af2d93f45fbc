#include "qdmae/domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdmae {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_input(const Eigen::VectorXd& x, int n, const char* who) {
  if (x.size() != n) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
  if (!x.allFinite()) {
    throw std::invalid_argument(std::string(who) + ": non-finite input");
  }
}

}  // namespace

SphereDomain::SphereDomain(int n, double offset, double measure_bound)
    : n_(n), offset_(offset), measure_bound_(measure_bound) {
  if (n_ < 2) throw std::invalid_argument("SphereDomain: n must be >= 2");
  const double corner = -measure_bound_ - offset_;
  raw_worst_ = n_ * corner * corner;
}

std::string SphereDomain::name() const {
  return "sphere-" + std::to_string(n_);
}

double SphereDomain::clip(double v, double bound) {
  return std::abs(v) <= bound ? v : bound * bound / v;
}

std::pair<double, Eigen::VectorXd> SphereDomain::evaluate(
    const Eigen::VectorXd& x) const {
  check_input(x, n_, "sphere_eval");
  const double raw = (x.array() - offset_).square().sum();
  const double objective = 100.0 * (raw_worst_ - raw) / raw_worst_;

  const int half = n_ / 2;
  Eigen::VectorXd measures = Eigen::VectorXd::Zero(2);
  for (int i = 0; i < half; ++i) measures[0] += clip(x[i], measure_bound_);
  for (int i = half; i < n_; ++i) measures[1] += clip(x[i], measure_bound_);
  return {objective, measures};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SphereDomain::measure_bounds()
    const {
  const double b = (n_ / 2) * measure_bound_;
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(2, -b);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(2, b);
  return {lower, upper};
}

ArmDomain::ArmDomain(int n) : n_(n) {
  if (n_ < 2) throw std::invalid_argument("ArmDomain: n must be >= 2");
}

std::string ArmDomain::name() const { return "arm-" + std::to_string(n_); }

std::pair<double, Eigen::VectorXd> ArmDomain::evaluate(
    const Eigen::VectorXd& theta) const {
  check_input(theta, n_, "arm_eval");
  const Eigen::VectorXd clipped = theta.cwiseMax(-kPi).cwiseMin(kPi);

  // Population variance of the clipped angles; var_max = pi^2 (attained by a
  // half-half split at +-pi), so the objective maps variance onto [0, 100].
  const double mean = clipped.mean();
  const double var = (clipped.array() - mean).square().sum() / n_;
  const double objective = 100.0 * (1.0 - var / (kPi * kPi));

  // Cumulative-angle forward kinematics with link length 1/n.
  const double len = 1.0 / n_;
  double angle = 0.0, x = 0.0, y = 0.0;
  for (int i = 0; i < n_; ++i) {
    angle += clipped[i];
    x += len * std::cos(angle);
    y += len * std::sin(angle);
  }
  Eigen::VectorXd measures(2);
  measures << x, y;
  return {objective, measures};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ArmDomain::measure_bounds() const {
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(2, -1.0);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(2, 1.0);
  return {lower, upper};
}

std::unique_ptr<Domain> make_domain(const std::string& name) {
  const auto parse_n = [&](std::size_t prefix_len) -> int {
    const std::string digits = name.substr(prefix_len);
    if (digits.empty() ||
        digits.find_first_not_of("0123456789") != std::string::npos) {
      return -1;
    }
    return std::stoi(digits);
  };
  if (name.rfind("sphere-", 0) == 0) {
    const int n = parse_n(7);
    if (n >= 2) return std::make_unique<SphereDomain>(n);
  } else if (name.rfind("arm-", 0) == 0) {
    const int n = parse_n(4);
    if (n >= 2) return std::make_unique<ArmDomain>(n);
  }
  throw std::invalid_argument(
      "domain: unknown name '" + name +
      "' (expected sphere-<n> or arm-<n>, e.g. sphere-100)");
}

}  // namespace qdmae
