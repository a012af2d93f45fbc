#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qdmae/archive.hpp"
#include "qdmae/scheduler.hpp"

namespace qdmae::csv {

// Shortest round-trip decimal representation (reproducible byte-for-byte
// across runs; '.' decimal separator, no locale involvement).
std::string format_double(double v);

// All writers emit a header row and LF line endings regardless of platform.
void write_log(const std::string& path, const std::vector<IterationStats>& log);

// `cell_index,m_0,...,m_{d-1},objective,threshold`, one row per occupied cell
// in increasing cell-index order.
void write_soft_archive(const std::string& path, const SoftArchive& archive);

// `cell_index,m_0,...,m_{d-1},objective` (no threshold column).
void write_result_archive(const std::string& path,
                          const ResultArchive& archive);

// Dense objective matrix for 2-D grids: header `row\col,0,1,...`, one row per
// measure-0 bin, empty cells blank. Throws for non-2-D grids.
void write_heatmap(const std::string& path, const ResultArchive& archive);
void write_heatmap(const std::string& path,
                   const std::vector<std::pair<long long, double>>& cells,
                   const std::vector<int>& grid_dims);

// Reads `cell_index` and `objective` columns from a sparse archive CSV
// (either schema). Throws on missing columns or malformed rows.
std::vector<std::pair<long long, double>> read_archive_cells(
    const std::string& path);

}  // namespace qdmae::csv
