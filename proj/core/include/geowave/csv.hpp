#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace geowave {

// Shortest decimal form that round-trips a double exactly.
std::string format_double(double value);

// `# key=value key=value ...` metadata line.
std::string metadata_line(const std::vector<std::pair<std::string, std::string>>& entries);

// Numeric CSV body: '#'-prefixed lines and blank lines are skipped and
// collected as `comments`. Ragged or non-numeric input raises IoError with
// the 1-based (row, column) of the offending cell, where rows count data
// lines only.
struct CsvTable {
  Eigen::MatrixXd values;
  std::vector<std::string> comments;
};

CsvTable read_numeric_csv(const std::filesystem::path& path);

// Opens for writing, throwing IoError instead of silently failing.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace geowave
