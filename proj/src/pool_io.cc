#include "aluma/pool_io.h"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace aluma {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  for (auto& c : cells) {
    const auto b = c.find_first_not_of(" \t\r");
    const auto e = c.find_last_not_of(" \t\r");
    c = b == std::string::npos ? "" : c.substr(b, e - b + 1);
  }
  return cells;
}

double parse_number(const std::string& cell, std::size_t line_no) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw IoError("line " + std::to_string(line_no) + ": non-numeric cell '" + cell + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  return out;
}

std::vector<std::vector<double>> read_rows(std::ifstream& in, std::size_t first_line,
                                           std::size_t width) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = first_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (width != 0 && cells.size() != width) {
      throw IoError("line " + std::to_string(line_no) + ": ragged row (" +
                    std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(width) + ")");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_number(c, line_no));
    if (width == 0) width = row.size();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void save_pool_csv(const Pool& pool, const std::vector<Label>* labels,
                   const std::string& path) {
  if (labels && labels->size() != pool.size()) {
    throw std::invalid_argument("save_pool_csv: label count mismatch");
  }
  std::ofstream out = open_out(path);
  for (int j = 0; j < pool.dim(); ++j) out << (j ? "," : "") << "f" << j;
  if (labels) out << ",label";
  out << "\n";
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (int j = 0; j < pool.dim(); ++j) {
      out << (j ? "," : "") << format_number(pool.points(static_cast<Eigen::Index>(i), j));
    }
    if (labels) out << "," << (*labels)[i];
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

void save_pool_csv(const OraclePool& pool, const std::string& path) {
  save_pool_csv(pool.pool, &pool.labels, path);
}

LoadedPool load_pool_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  std::string header;
  if (!std::getline(in, header)) throw IoError("empty file: " + path);
  const auto cols = split_csv_line(header);
  bool has_label = !cols.empty() && cols.back() == "label";
  const std::size_t d = cols.size() - (has_label ? 1 : 0);
  if (d == 0) throw IoError("no feature columns: " + path);
  for (std::size_t j = 0; j < d; ++j) {
    if (cols[j] != "f" + std::to_string(j)) {
      throw IoError("bad header cell '" + cols[j] + "', expected f" + std::to_string(j));
    }
  }
  const auto rows = read_rows(in, 1, cols.size());
  if (rows.empty()) throw IoError("no data rows: " + path);

  LoadedPool out;
  out.pool.points.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  std::vector<Label> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < d; ++j) out.pool.points(i, j) = rows[i][j];
    if (has_label) {
      const double y = rows[i][d];
      if (y != 1.0 && y != -1.0) {
        throw IoError("line " + std::to_string(i + 2) + ": label must be -1 or 1");
      }
      labels.push_back(static_cast<Label>(y));
    }
  }
  if (has_label) out.labels = std::move(labels);
  return out;
}

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

void save_sidecar(const OraclePool& pool, const std::string& path) {
  nlohmann::json j = {{"generator", pool.info.generator},
                      {"params", pool.info.params},
                      {"seed", pool.info.seed},
                      {"target", pool.info.target},
                      {"realizable", pool.realizable},
                      {"m", pool.pool.size()},
                      {"d", pool.pool.dim()}};
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

GeneratorInfo load_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    GeneratorInfo info;
    info.generator = j.at("generator").get<std::string>();
    info.params = j.at("params");
    info.seed = j.at("seed").get<std::uint64_t>();
    info.target = j.at("target");
    return info;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad sidecar " + path + ": " + e.what());
  }
}

RowMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  const auto rows = read_rows(in, 0, 0);
  if (rows.empty()) throw IoError("empty matrix file: " + path);
  RowMatrix m(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void save_matrix_csv(const RowMatrix& m, const std::string& path) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << format_number(m(i, j));
    out << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace aluma
