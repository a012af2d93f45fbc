#pragma once

#include <cstdint>
#include <optional>

#include "qdmae/archive.hpp"

namespace qdmae {

// Aggregate metrics over a result archive. `best` is absent when the archive
// is empty.
struct MetricsReport {
  double qd_score = 0.0;
  double coverage = 0.0;
  std::optional<double> best;
  std::int64_t elapsed_ms = 0;
};

// qd_score sums (objective - min_f) over occupied cells; coverage is
// occupied / total cells; best is the maximum stored objective.
MetricsReport summarize(const ResultArchive& result, double min_f,
                        std::int64_t elapsed_ms);

}  // namespace qdmae
