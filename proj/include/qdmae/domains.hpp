#pragma once

#include <memory>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace qdmae {

/// A benchmark problem: pure objective/measure evaluation plus the measure
/// bounds that define the archive grid. Evaluations are reentrant.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual std::string name() const = 0;
  virtual int dimension() const = 0;
  /// Returns (objective in [0, 100] for in-range inputs, 2-D measures).
  virtual std::pair<double, Eigen::VectorXd> evaluate(
      const Eigen::VectorXd& x) const = 0;
  /// Per-measure (lower, upper) bounds for the archive grid.
  virtual std::pair<Eigen::VectorXd, Eigen::VectorXd> measure_bounds()
      const = 0;
};

/// Sphere linear projection: objective is the offset sphere function
/// normalized so the worst corner scores 0 and the optimum scores 100;
/// measures are the clipped half-sums of the coordinates.
class SphereDomain : public Domain {
 public:
  explicit SphereDomain(int n, double offset = 2.048,
                        double measure_bound = 5.12);

  std::string name() const override;
  int dimension() const override { return n_; }
  std::pair<double, Eigen::VectorXd> evaluate(
      const Eigen::VectorXd& x) const override;
  std::pair<Eigen::VectorXd, Eigen::VectorXd> measure_bounds() const override;

  double offset() const { return offset_; }
  double clip_bound() const { return measure_bound_; }

  /// Fold-clip: v for |v| <= bound, else bound^2 / v (continuous at |v| =
  /// bound, decays toward 0 beyond it).
  static double clip(double v, double bound);

 private:
  int n_;
  double offset_;
  double measure_bound_;
  double raw_worst_;  // sphere value at the worst corner -bound * 1
};

/// Planar arm repertoire: n equally-sized links of total length 1. The
/// objective rewards low variance of the (clipped) joint angles; measures are
/// the end-effector position from cumulative-angle forward kinematics.
class ArmDomain : public Domain {
 public:
  explicit ArmDomain(int n);

  std::string name() const override;
  int dimension() const override { return n_; }
  std::pair<double, Eigen::VectorXd> evaluate(
      const Eigen::VectorXd& theta) const override;
  std::pair<Eigen::VectorXd, Eigen::VectorXd> measure_bounds() const override;

  double link_length() const { return 1.0 / n_; }

 private:
  int n_;
};

/// Registry lookup by name: accepts `sphere-<n>` and `arm-<n>` for any
/// n >= 2 (benchmarks use sphere-100, sphere-1000, arm-100, arm-1000).
/// Throws std::invalid_argument naming `domain` on unknown names.
std::unique_ptr<Domain> make_domain(const std::string& name);

}  // namespace qdmae
