#include "geowave/csv.hpp"

#include <cstdio>
#include <sstream>

#include "geowave/errors.hpp"

namespace geowave {

std::string format_double(double value) {
  char buf[64];
  // %.17g always round-trips but is noisy; try shorter forms first.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
    if (std::strtod(buf, nullptr) == value) return buf;
  }
  return buf;
}

std::string metadata_line(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ostringstream out;
  out << "#";
  for (const auto& [key, value] : entries) {
    out << ' ' << key << '=' << value;
  }
  return out.str();
}

CsvTable read_numeric_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  CsvTable table;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.comments.push_back(line);
      continue;
    }
    ++data_row;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t col = 0;
    while (start <= line.size()) {
      ++col;
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      const std::string cell = line.substr(start, end - start);
      char* parse_end = nullptr;
      const double value = std::strtod(cell.c_str(), &parse_end);
      // Require the whole cell (modulo surrounding spaces) to be consumed.
      const char* p = parse_end;
      while (*p == ' ' || *p == '\t') ++p;
      const char* q = cell.c_str();
      while (*q == ' ' || *q == '\t') ++q;
      if (parse_end == q || *p != '\0') {
        std::ostringstream msg;
        msg << path.string() << ": non-numeric cell at row " << data_row << " col " << col
            << " ('" << cell << "')";
        throw IoError(msg.str());
      }
      row.push_back(value);
      start = end + 1;
      if (end == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path.string() << ": row " << data_row << " has " << row.size()
          << " columns, expected " << rows.front().size();
      throw IoError(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError(path.string() + ": no data rows");
  }
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  return out;
}

}  // namespace geowave
