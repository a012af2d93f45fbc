#include "qdmae/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace qdmae::csv {
namespace {

std::ofstream open_for_write(const std::string& path) {
  // Binary mode keeps "\n" as LF on every platform.
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const std::string& path) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error("malformed number '" + text + "' in " + path);
  }
  return value;
}

long long parse_int(const std::string& text, const std::string& path) {
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::runtime_error("malformed integer '" + text + "' in " + path);
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void write_log(const std::string& path,
               const std::vector<IterationStats>& log) {
  std::ofstream out = open_for_write(path);
  out << "iter,evals,qd_score,coverage,best,restarts,wall_time_ms\n";
  for (const IterationStats& s : log) {
    out << s.iteration << ',' << s.evaluations << ','
        << format_double(s.qd_score) << ',' << format_double(s.coverage) << ','
        << format_double(s.best) << ',' << s.restarts_this_iter << ','
        << s.wall_time_ms << '\n';
  }
}

namespace {

void write_measure_header(std::ofstream& out, int d) {
  out << "cell_index";
  for (int i = 0; i < d; ++i) out << ",m_" << i;
}

void write_measures(std::ofstream& out, const Eigen::VectorXd& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out << ',' << format_double(m[i]);
  }
}

}  // namespace

void write_soft_archive(const std::string& path, const SoftArchive& archive) {
  std::ofstream out = open_for_write(path);
  write_measure_header(out, archive.spec().measure_dims());
  out << ",objective,threshold\n";
  for (const auto& [cell, record] : archive.snapshot()) {
    out << cell;
    write_measures(out, record->measures);
    out << ',' << format_double(record->objective) << ','
        << format_double(archive.threshold(cell)) << '\n';
  }
}

void write_result_archive(const std::string& path,
                          const ResultArchive& archive) {
  std::ofstream out = open_for_write(path);
  write_measure_header(out, archive.spec().measure_dims());
  out << ",objective\n";
  for (const auto& [cell, record] : archive.snapshot()) {
    out << cell;
    write_measures(out, record->measures);
    out << ',' << format_double(record->objective) << '\n';
  }
}

void write_heatmap(const std::string& path,
                   const std::vector<std::pair<long long, double>>& cells,
                   const std::vector<int>& grid_dims) {
  if (grid_dims.size() != 2) {
    throw std::invalid_argument("heatmap: only 2-D grids are supported");
  }
  const long long rows = grid_dims[0];
  const long long cols = grid_dims[1];
  std::vector<std::string> dense(static_cast<std::size_t>(rows * cols));
  for (const auto& [cell, objective] : cells) {
    if (cell < 0 || cell >= rows * cols) {
      throw std::runtime_error("heatmap: cell_index " + std::to_string(cell) +
                               " outside the " + std::to_string(rows) + "x" +
                               std::to_string(cols) + " grid");
    }
    dense[static_cast<std::size_t>(cell)] = format_double(objective);
  }
  std::ofstream out = open_for_write(path);
  out << "row\\col";
  for (long long c = 0; c < cols; ++c) out << ',' << c;
  out << '\n';
  for (long long r = 0; r < rows; ++r) {
    out << r;
    for (long long c = 0; c < cols; ++c) {
      out << ',' << dense[static_cast<std::size_t>(r * cols + c)];
    }
    out << '\n';
  }
}

void write_heatmap(const std::string& path, const ResultArchive& archive) {
  std::vector<std::pair<long long, double>> cells;
  for (const auto& [cell, record] : archive.snapshot()) {
    cells.emplace_back(cell, record->objective);
  }
  write_heatmap(path, cells, archive.spec().dims);
}

std::vector<std::pair<long long, double>> read_archive_cells(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty archive CSV: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split(line, ',');
  int cell_col = -1;
  int objective_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "cell_index") cell_col = static_cast<int>(i);
    if (header[i] == "objective") objective_col = static_cast<int>(i);
  }
  if (cell_col < 0 || objective_col < 0) {
    throw std::runtime_error(
        "archive CSV missing cell_index/objective columns: " + path);
  }
  std::vector<std::pair<long long, double>> cells;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw std::runtime_error("ragged row in " + path);
    }
    cells.emplace_back(parse_int(fields[cell_col], path),
                       parse_double(fields[objective_col], path));
  }
  return cells;
}

}  // namespace qdmae::csv
