#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qdmae/rng.hpp"
#include "qdmae/solution.hpp"

namespace qdmae {

/// Uniform grid tessellation of measure space.
struct GridSpec {
  std::vector<int> dims;   // cells per measure dimension, each >= 1
  Eigen::VectorXd lower;   // per-measure lower bounds
  Eigen::VectorXd upper;   // per-measure upper bounds (lower[i] < upper[i])

  GridSpec() = default;
  GridSpec(std::vector<int> d, Eigen::VectorXd lo, Eigen::VectorXd hi);

  int measure_dims() const { return static_cast<int>(dims.size()); }
  long long cell_count() const;
};

/// Row-major flat index of the cell containing `measures`. Out-of-range
/// measures are clipped into the boundary cell; a measure exactly at the
/// upper bound maps to the last cell. Throws on non-finite measures.
long long cell_index(const GridSpec& spec, const Eigen::VectorXd& measures);

/// Outcome of one archive insertion.
struct InsertResult {
  double improvement = 0.0;  // Delta = f - t_e at insertion time
  bool accepted = false;     // f > t_e (strict)
  long long cell = -1;
};

/// Grid of best-ever solutions per cell; the basis of all metrics.
/// Per-cell stored objective and total occupancy are non-decreasing.
class ResultArchive {
 public:
  ResultArchive() = default;
  explicit ResultArchive(GridSpec spec);

  const GridSpec& spec() const { return spec_; }
  long long occupied_count() const { return occupied_; }
  const std::optional<SolutionRecord>& cell(long long index) const {
    return cells_[static_cast<std::size_t>(index)];
  }

  /// Replace cell occupant iff `s.objective` strictly exceeds the stored
  /// objective (or the cell is empty). Returns true when stored.
  bool offer(long long cell, const SolutionRecord& s);

  /// Occupied cells in strictly increasing cell-index order.
  std::vector<std::pair<long long, const SolutionRecord*>> snapshot() const;

 private:
  GridSpec spec_;
  std::vector<std::optional<SolutionRecord>> cells_;
  long long occupied_ = 0;
};

/// The annealed archive of Algorithm-style threshold insertion: each cell
/// carries an acceptance threshold t_e, initialized to min_f and raised by
/// polyak averaging on every accepted insertion.
class SoftArchive {
 public:
  SoftArchive() = default;
  SoftArchive(GridSpec spec, double alpha, double min_f);

  const GridSpec& spec() const { return spec_; }
  double alpha() const { return alpha_; }
  double min_f() const { return min_f_; }
  long long occupied_count() const {
    return static_cast<long long>(occupied_cells_.size());
  }
  double threshold(long long index) const {
    return cells_[static_cast<std::size_t>(index)].threshold;
  }
  const std::optional<SolutionRecord>& occupant(long long index) const {
    return cells_[static_cast<std::size_t>(index)].occupant;
  }

  /// Uniformly random occupant of an occupied cell. Throws when empty
  /// (callers fall back to the initial solution).
  const SolutionRecord& random_elite(Rng& rng) const;

  /// Occupied cells in strictly increasing cell-index order.
  std::vector<std::pair<long long, const SolutionRecord*>> snapshot() const;

 private:
  friend InsertResult insert(SoftArchive&, ResultArchive&,
                             const SolutionRecord&);

  struct Cell {
    std::optional<SolutionRecord> occupant;
    double threshold = 0.0;
  };

  GridSpec spec_;
  double alpha_ = 0.0;
  double min_f_ = 0.0;
  std::vector<Cell> cells_;
  std::vector<long long> occupied_cells_;  // first-occupancy order
};

/// Insert `s` into both archives:
///  - soft archive: Delta = f - t_e; iff f > t_e, the occupant is replaced and
///    t_e <- (1 - alpha) t_e + alpha f;
///  - result archive: replaced iff f exceeds the stored best for the cell.
/// Throws on non-finite objective/measures before any mutation.
InsertResult insert(SoftArchive& soft, ResultArchive& result,
                    const SolutionRecord& s);

}  // namespace qdmae
