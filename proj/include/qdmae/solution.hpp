#pragma once

#include <Eigen/Core>

namespace qdmae {

/// An n-dimensional parameter vector together with its evaluation result.
struct SolutionRecord {
  Eigen::VectorXd params;
  double objective = 0.0;
  Eigen::VectorXd measures;
};

}  // namespace qdmae
