#include "qdmae/archive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdmae {

GridSpec::GridSpec(std::vector<int> d, Eigen::VectorXd lo, Eigen::VectorXd hi)
    : dims(std::move(d)), lower(std::move(lo)), upper(std::move(hi)) {
  if (dims.empty()) throw std::invalid_argument("GridSpec: dims empty");
  if (lower.size() != static_cast<Eigen::Index>(dims.size()) ||
      upper.size() != static_cast<Eigen::Index>(dims.size())) {
    throw std::invalid_argument("GridSpec: bounds/dims size mismatch");
  }
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw std::invalid_argument("GridSpec: dims entry < 1");
    const auto j = static_cast<Eigen::Index>(i);
    if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) ||
        !(lower[j] < upper[j])) {
      throw std::invalid_argument("GridSpec: invalid bounds");
    }
  }
}

long long GridSpec::cell_count() const {
  long long m = 1;
  for (int d : dims) m *= d;
  return m;
}

long long cell_index(const GridSpec& spec, const Eigen::VectorXd& measures) {
  if (measures.size() != static_cast<Eigen::Index>(spec.dims.size())) {
    throw std::invalid_argument("cell_index: measure dimension mismatch");
  }
  long long flat = 0;
  for (std::size_t i = 0; i < spec.dims.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    const double m = measures[j];
    if (!std::isfinite(m)) {
      throw std::invalid_argument("cell_index: non-finite measure " +
                                  std::to_string(i));
    }
    const double span = spec.upper[j] - spec.lower[j];
    const double pos = (m - spec.lower[j]) / span * spec.dims[i];
    long long idx = static_cast<long long>(std::floor(pos));
    idx = std::clamp(idx, 0LL, static_cast<long long>(spec.dims[i]) - 1);
    flat = flat * spec.dims[i] + idx;
  }
  return flat;
}

ResultArchive::ResultArchive(GridSpec spec) : spec_(std::move(spec)) {
  cells_.resize(static_cast<std::size_t>(spec_.cell_count()));
}

bool ResultArchive::offer(long long cell, const SolutionRecord& s) {
  auto& slot = cells_[static_cast<std::size_t>(cell)];
  if (!slot) {
    slot = s;
    ++occupied_;
    return true;
  }
  if (s.objective > slot->objective) {
    slot = s;
    return true;
  }
  return false;
}

std::vector<std::pair<long long, const SolutionRecord*>>
ResultArchive::snapshot() const {
  std::vector<std::pair<long long, const SolutionRecord*>> out;
  out.reserve(static_cast<std::size_t>(occupied_));
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i]) out.emplace_back(static_cast<long long>(i), &*cells_[i]);
  }
  return out;
}

SoftArchive::SoftArchive(GridSpec spec, double alpha, double min_f)
    : spec_(std::move(spec)), alpha_(alpha), min_f_(min_f) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("SoftArchive: alpha must be in [0, 1]");
  }
  if (!std::isfinite(min_f)) {
    throw std::invalid_argument("SoftArchive: min_f must be finite");
  }
  cells_.resize(static_cast<std::size_t>(spec_.cell_count()));
  for (auto& c : cells_) c.threshold = min_f_;
}

const SolutionRecord& SoftArchive::random_elite(Rng& rng) const {
  if (occupied_cells_.empty()) {
    throw std::runtime_error("random_elite: archive is empty");
  }
  const std::uint64_t pick = rng.uniform_int(occupied_cells_.size());
  const long long cell = occupied_cells_[static_cast<std::size_t>(pick)];
  return *cells_[static_cast<std::size_t>(cell)].occupant;
}

std::vector<std::pair<long long, const SolutionRecord*>>
SoftArchive::snapshot() const {
  std::vector<std::pair<long long, const SolutionRecord*>> out;
  out.reserve(occupied_cells_.size());
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cells_[i].occupant) {
      out.emplace_back(static_cast<long long>(i), &*cells_[i].occupant);
    }
  }
  return out;
}

InsertResult insert(SoftArchive& soft, ResultArchive& result,
                    const SolutionRecord& s) {
  if (!std::isfinite(s.objective)) {
    throw std::invalid_argument("insert: non-finite objective");
  }
  if (!s.measures.allFinite()) {
    throw std::invalid_argument("insert: non-finite measures");
  }
  const long long e = cell_index(soft.spec(), s.measures);
  auto& cell = soft.cells_[static_cast<std::size_t>(e)];

  InsertResult r;
  r.cell = e;
  r.improvement = s.objective - cell.threshold;
  r.accepted = s.objective > cell.threshold;
  if (r.accepted) {
    if (!cell.occupant) soft.occupied_cells_.push_back(e);
    cell.occupant = s;
    cell.threshold =
        (1.0 - soft.alpha_) * cell.threshold + soft.alpha_ * s.objective;
  }
  result.offer(e, s);
  return r;
}

}  // namespace qdmae
