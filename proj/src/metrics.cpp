#include "qdmae/metrics.hpp"

#include <algorithm>

namespace qdmae {

MetricsReport summarize(const ResultArchive& result, double min_f,
                        std::int64_t elapsed_ms) {
  MetricsReport report;
  report.elapsed_ms = elapsed_ms;
  const long long total = result.spec().cell_count();
  long long occupied = 0;
  for (const auto& [cell, record] : result.snapshot()) {
    (void)cell;
    ++occupied;
    report.qd_score += record->objective - min_f;
    if (!report.best || record->objective > *report.best) {
      report.best = record->objective;
    }
  }
  report.coverage = total > 0 ? static_cast<double>(occupied) / total : 0.0;
  return report;
}

}  // namespace qdmae
